#include "cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pscurve/arclength.hpp"
#include "pscurve/equivalence.hpp"
#include "pscurve/error.hpp"
#include "pscurve/invariants.hpp"
#include "pscurve/path.hpp"
#include "pscurve/report.hpp"

namespace pscurve::cli {

namespace {

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string group = "o";
    std::optional<int> n;
    std::optional<int> p;
    std::string field = "real";  // sample-group only; files carry their own
    int grid = 33;
    double tol = 1e-8;
    double qtol = 1e-10;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string mode = "paths";
    int count = 1;
    double scale = 1.0;
    std::optional<double> singular_tol;
    double floor = 1e-12;
};

// Usage problems that CLI11 cannot see, such as --n disagreeing with the file.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file could not be parsed.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json config_json(const RunConfig& c, const std::optional<GroupTag>& group) {
    Json j;
    j["command"] = c.command;
    j["inputs"] = c.inputs;
    if (group) {
        j["group"] = group->name();
        j["family"] = std::string(to_string(group->family));
        j["n"] = group->sig.n();
        j["p"] = group->sig.p();
        j["field"] = std::string(to_string(group->field));
    }
    j["grid"] = c.grid;
    j["tol"] = c.tol;
    j["qtol"] = c.qtol;
    j["seed"] = c.seed;
    j["format"] = c.format;
    if (c.command == "equiv") {
        j["mode"] = c.mode;
    }
    if (c.command == "sample-group") {
        j["count"] = c.count;
        j["scale"] = c.scale;
    }
    if (c.command == "validate") {
        j["singular_tol"] = c.singular_tol ? Json(*c.singular_tol) : Json("auto");
        j["floor"] = c.floor;
    }
    return j;
}

PathDef load(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + file);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_path(buf.str());
    } catch (const ParseError& e) {
        throw InputError(file + ": " + e.what());
    }
}

GroupTag group_for(const RunConfig& c, const PathDef& path) {
    const Family family = parse_family(c.group);
    if (c.n && *c.n != path.sig().n()) {
        throw UsageError("--n " + std::to_string(*c.n) + " does not match n=" + std::to_string(path.sig().n()) +
                         " in the file header");
    }
    if (c.p && *c.p != path.sig().p()) {
        throw UsageError("--p " + std::to_string(*c.p) + " does not match p=" + std::to_string(path.sig().p()) +
                         " in the file header");
    }
    return GroupTag{family, path.sig(), path.field()};
}

void emit(const RunConfig& c, Json doc, const std::optional<GroupTag>& group, std::ostream& out) {
    Json full;
    full["config"] = config_json(c, group);
    for (auto& [k, v] : doc.items()) {
        full[k] = v;
    }
    out << (c.format == "csv" ? render_csv(full) : render_json(full));
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
    const PathDef path = load(c.inputs.at(0));
    const std::vector<double> grid = default_grid(path.interval(), c.grid);
    const RegularityReport reg = is_strongly_regular(path, grid, c.singular_tol);
    const NondegeneracyReport nd = is_nondegenerate(path, grid, c.floor);

    Json doc;
    doc["label"] = path.label();
    doc["field"] = std::string(to_string(path.field()));
    doc["n"] = path.sig().n();
    doc["p"] = path.sig().p();
    doc["interval"] = to_string(path.interval());
    doc["summary"] = std::string("strongly regular: ") + (reg.pass ? "yes" : "no") +
                     "; non-degenerate: " + (nd.pass ? "yes" : "no");
    doc["strongly_regular"] = reg.pass;
    doc["non_degenerate"] = nd.pass;
    Json det;
    det["min_abs"] = number_json(reg.min_abs_det);
    det["max_abs"] = number_json(reg.max_abs_det);
    det["failing"] = reg.failing;
    det["notes"] = reg.notes;
    doc["det_m"] = std::move(det);
    Json w;
    w["min_abs"] = number_json(nd.min_abs);
    w["max_abs"] = number_json(nd.max_abs);
    w["failing"] = nd.failing;
    w["sign_changes"] = nd.sign_changes;
    w["notes"] = nd.notes;
    doc["speed_form"] = std::move(w);
    emit(c, std::move(doc), std::nullopt, out);
    return reg.pass && nd.pass ? kOk : kInvalidPath;
}

int cmd_invariants(const RunConfig& c, std::ostream& out) {
    const PathDef path = load(c.inputs.at(0));
    const GroupTag group = group_for(c, path);
    std::vector<GeneratorSignature> rows;
    for (double t : default_grid(path.interval(), c.grid)) {
        rows.push_back(generator_signature(path, group, t));
    }
    if (c.format == "csv") {
        out << signature_csv(group, rows, config_json(c, group));
        return kOk;
    }
    emit(c, signature_json(path, group, rows), group, out);
    return kOk;
}

ArcOptions arc_options(const RunConfig& c) {
    ArcOptions o;
    o.qtol = c.qtol;
    return o;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
    const PathDef path = load(c.inputs.at(0));
    Json doc = classification_json(classify_type(path, arc_options(c)));
    doc["label"] = path.label();
    doc["interval"] = to_string(path.interval());
    emit(c, std::move(doc), std::nullopt, out);
    return kOk;
}

int cmd_equiv(const RunConfig& c, std::ostream& out) {
    const PathDef x = load(c.inputs.at(0));
    const PathDef y = load(c.inputs.at(1));
    if (x.sig() != y.sig()) {
        throw UsageError("the two files declare different signatures (n=" + std::to_string(x.sig().n()) +
                         ", p=" + std::to_string(x.sig().p()) + " vs n=" + std::to_string(y.sig().n()) +
                         ", p=" + std::to_string(y.sig().p()) + ")");
    }
    if (x.field() != y.field()) {
        throw UsageError("the two files declare different fields");
    }
    const GroupTag group = group_for(c, x);
    if (c.mode == "curves") {
        CurveOptions o;
        o.tol = c.tol;
        o.arc = arc_options(c);
        o.grid = c.grid;
        const CurveVerdict v = curves_equivalent(x, y, group, o);
        emit(c, curve_verdict_json(v, group, c.tol), group, out);
        return v.equivalent ? kOk : kNotEquivalent;
    }
    const EquivalenceVerdict v = paths_equivalent(x, y, group, default_grid(x.interval(), c.grid), c.tol);
    emit(c, verdict_json(v, group, c.tol), group, out);
    return v.equivalent ? kOk : kNotEquivalent;
}

int cmd_sample_group(const RunConfig& c, std::ostream& out) {
    if (!c.n) {
        throw UsageError("sample-group needs --n");
    }
    const Signature sig(*c.n, c.p.value_or(*c.n));
    const GroupTag group{parse_family(c.group), sig, parse_field(c.field)};
    Json elements = Json::array();
    for (int k = 0; k < c.count; ++k) {
        const GroupElement h = sample_group_element(group, c.seed + static_cast<std::uint64_t>(k), c.scale);
        elements.push_back(group_element_json(h, group));
    }
    emit(c, Json{{"elements", std::move(elements)}}, group, out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Equivalence and invariant parametrization of paths in pseudo-Euclidean space", "pscurve"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--grid", c.grid, "Grid points")->check(CLI::Range(2, 100000));
        sub->add_option("--tol", c.tol, "Relative tolerance of the identities")->check(CLI::PositiveNumber);
        sub->add_option("--qtol", c.qtol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", c.seed, "Seed");
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto group_opts = [&](CLI::App* sub) {
        sub->add_option("--group", c.group, "Group family")->check(CLI::IsMember({"o", "so", "eo", "eso"}));
        sub->add_option("--n", c.n, "Dimension (must match the file)");
        sub->add_option("--p", c.p, "Positive index (must match the file)");
    };

    CLI::App* validate = app.add_subcommand("validate", "Parse a path file and check regularity");
    validate->add_option("file", c.inputs, "Path file")->required()->expected(1);
    validate->add_option("--singular-tol", c.singular_tol, "Fixed |det M| threshold");
    validate->add_option("--floor", c.floor, "|[x', x']| floor");
    common(validate);

    CLI::App* invariants = app.add_subcommand("invariants", "Generator signature over a grid");
    invariants->add_option("file", c.inputs, "Path file")->required()->expected(1);
    group_opts(invariants);
    common(invariants);

    CLI::App* classify = app.add_subcommand("classify", "Path type and invariant interval");
    classify->add_option("file", c.inputs, "Path file")->required()->expected(1);
    common(classify);

    CLI::App* equiv = app.add_subcommand("equiv", "Decide equivalence of two paths or curves");
    equiv->add_option("files", c.inputs, "Two path files")->required()->expected(2);
    equiv->add_option("--mode", c.mode, "paths or curves")->check(CLI::IsMember({"paths", "curves"}));
    group_opts(equiv);
    common(equiv);

    CLI::App* sample = app.add_subcommand("sample-group", "Pseudo-random group elements");
    group_opts(sample);
    sample->add_option("--field", c.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
    sample->add_option("--count", c.count, "Number of elements")->check(CLI::NonNegativeNumber);
    sample->add_option("--scale", c.scale, "Translation range");
    common(sample);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "pscurve: " << e.what() << "\n";
        return kUsageError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    c.command = chosen->get_name();
    const bool is_equiv = c.command == "equiv";
    try {
        if (c.command == "validate") {
            return cmd_validate(c, out);
        }
        if (c.command == "invariants") {
            return cmd_invariants(c, out);
        }
        if (c.command == "classify") {
            return cmd_classify(c, out);
        }
        if (c.command == "equiv") {
            return cmd_equiv(c, out);
        }
        return cmd_sample_group(c, out);
    } catch (const InputError& e) {
        err << "pscurve: " << e.what() << "\n";
        return is_equiv ? kRuntimeError : kParseError;
    } catch (const UsageError& e) {
        err << "pscurve: " << e.what() << "\n";
        return is_equiv ? kRuntimeError : kUsageError;
    } catch (const std::exception& e) {
        err << "pscurve: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace pscurve::cli
