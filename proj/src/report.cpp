#include "pscurve/report.hpp"

#include <cmath>
#include <cstdio>

#include "pscurve/forms.hpp"

namespace pscurve {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json number_json(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

Json scalar_json(Scalar v, Field field) {
    if (field == Field::Real) {
        return number_json(v.real());
    }
    return Json::array({number_json(v.real()), number_json(v.imag())});
}

Json vector_json(const Vector& v, Field field) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(scalar_json(v(i), field));
    }
    return out;
}

Json matrix_json(const Matrix& m, Field field) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out.push_back(vector_json(m.row(i).transpose(), field));
    }
    return out;
}

Json group_json(const GroupTag& group) {
    return Json{{"family", std::string(to_string(group.family))},
                {"n", group.sig.n()},
                {"p", group.sig.p()},
                {"field", std::string(to_string(group.field))},
                {"name", group.name()}};
}

Json signature_json(const PathDef& path, const GroupTag& group, const std::vector<GeneratorSignature>& rows) {
    Json doc;
    doc["group"] = group_json(group);
    doc["sig"] = Json{{"n", path.sig().n()}, {"p", path.sig().p()}};
    doc["field"] = std::string(to_string(path.field()));
    doc["label"] = path.label();
    doc["labels"] = signature_labels(group);
    Json out = Json::array();
    for (const GeneratorSignature& r : rows) {
        Json values = Json::array();
        for (Scalar v : r.values) {
            values.push_back(scalar_json(v, group.field));
        }
        out.push_back(Json{{"t", number_json(r.t)}, {"values", std::move(values)}});
    }
    doc["rows"] = std::move(out);
    return doc;
}

namespace {

void config_comments(const Json& config, std::string& out) {
    if (!config.is_object()) {
        return;
    }
    for (const auto& [k, v] : config.items()) {
        out += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
}

}  // namespace

std::string signature_csv(const GroupTag& group, const std::vector<GeneratorSignature>& rows, const Json& config) {
    std::string out;
    config_comments(config, out);
    const bool complex = group.field == Field::Complex;
    out += "t";
    for (const std::string& l : signature_labels(group)) {
        out += complex ? "," + l + "_re," + l + "_im" : "," + l;
    }
    out += "\n";
    for (const GeneratorSignature& r : rows) {
        out += format_number(r.t);
        for (Scalar v : r.values) {
            out += "," + format_number(v.real());
            if (complex) {
                out += "," + format_number(v.imag());
            }
        }
        out += "\n";
    }
    return out;
}

Json verdict_json(const EquivalenceVerdict& v, const GroupTag& group, double tol) {
    Json doc;
    doc["equivalent"] = v.equivalent;
    doc["group"] = group.name();
    doc["tolerance"] = number_json(tol);
    if (v.witness) {
        Json w;
        w["g"] = matrix_json(v.witness->g, group.field);
        w["u"] = v.witness->u ? vector_json(*v.witness->u, group.field) : Json(nullptr);
        doc["witness"] = std::move(w);
    } else {
        doc["witness"] = nullptr;
    }
    doc["max_defect"] = number_json(v.max_defect);
    Json failures = Json::array();
    for (const Failure& f : v.failures) {
        failures.push_back(Json{{"t", number_json(f.t)}, {"identity", f.identity}, {"defect", number_json(f.defect)}});
    }
    doc["failures"] = std::move(failures);
    doc["identities_hold"] = v.identities_hold;
    doc["witness_valid"] = v.witness_valid;
    doc["identity_defect"] = number_json(v.identity_defect);
    doc["witness_defect"] = number_json(v.witness_defect);
    return doc;
}

Json classification_json(const TypedInterval& ti) {
    auto tail = [](const TailDiagnostics& d) {
        return Json{{"finite", d.finite},
                    {"value", number_json(d.value)},
                    {"steps", d.steps},
                    {"last_increment", number_json(d.last_increment)},
                    {"reason", d.reason}};
    };
    return Json{{"type", std::string(to_string(ti.ptype))},
                {"A", number_json(ti.a_inv)},
                {"B", number_json(ti.b_inv)},
                {"a_I", number_json(ti.a_I)},
                {"tail_diagnostics", Json{{"left", tail(ti.left)}, {"right", tail(ti.right)}}}};
}

Json curve_verdict_json(const CurveVerdict& v, const GroupTag& group, double tol) {
    Json doc = verdict_json(v, group, tol);
    doc["type_x"] = std::string(to_string(v.type_x));
    doc["type_y"] = std::string(to_string(v.type_y));
    doc["s0"] = number_json(v.s0);
    doc["classification_x"] = classification_json(v.typed_x);
    doc["classification_y"] = classification_json(v.typed_y);
    return doc;
}

Json group_element_json(const GroupElement& h, const GroupTag& group) {
    Json doc;
    doc["g"] = matrix_json(h.g, group.field);
    doc["u"] = h.u ? vector_json(*h.u, group.field) : Json(nullptr);
    doc["membership_defect"] = number_json(membership_defect(h.g, group));
    doc["det"] = scalar_json(determinant(h.g), group.field);
    return doc;
}

std::string render_json(const Json& doc) { return doc.dump(2) + "\n"; }

namespace {

void flatten(const Json& node, const std::string& key, std::string& out) {
    if (node.is_object()) {
        for (const auto& [k, v] : node.items()) {
            flatten(v, key.empty() ? k : key + "." + k, out);
        }
        return;
    }
    if (node.is_array()) {
        if (node.empty()) {
            out += key + ",\n";
        }
        for (std::size_t i = 0; i < node.size(); ++i) {
            flatten(node[i], key + "[" + std::to_string(i) + "]", out);
        }
        return;
    }
    std::string value;
    if (node.is_string()) {
        value = node.get<std::string>();
        if (value.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : value) {
                quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
            }
            value = quoted + "\"";
        }
    } else if (node.is_number_float()) {
        value = format_number(node.get<double>());
    } else if (node.is_null()) {
        value = "";
    } else {
        value = node.dump();
    }
    out += key + "," + value + "\n";
}

}  // namespace

std::string render_csv(const Json& doc) {
    std::string out;
    if (doc.is_object() && doc.contains("config")) {
        config_comments(doc["config"], out);
    }
    out += "key,value\n";
    if (doc.is_object()) {
        for (const auto& [k, v] : doc.items()) {
            if (k != "config") {
                flatten(v, k, out);
            }
        }
    } else {
        flatten(doc, "", out);
    }
    return out;
}

}  // namespace pscurve
