#pragma once

// JSON and CSV renderings of signatures, verdicts and classifications.
//
// Complex fields serialize every value as [re, im]; real fields as plain
// numbers. Non-finite numbers become the strings "inf", "-inf", "nan".

#include <string>
#include <vector>

#include <json.hpp>

#include "pscurve/arclength.hpp"
#include "pscurve/equivalence.hpp"
#include "pscurve/invariants.hpp"

namespace pscurve {

using Json = nlohmann::ordered_json;

Json number_json(double v);
Json scalar_json(Scalar v, Field field);
Json vector_json(const Vector& v, Field field);
Json matrix_json(const Matrix& m, Field field);
Json group_json(const GroupTag& group);

/// {group, sig, field, label, labels, rows: [{t, values}]}.
Json signature_json(const PathDef& path, const GroupTag& group, const std::vector<GeneratorSignature>& rows);

/// Columns t, then one per label (label_re, label_im for complex fields).
std::string signature_csv(const GroupTag& group, const std::vector<GeneratorSignature>& rows, const Json& config);

/// {equivalent, group, tolerance, witness: {g, u}, max_defect, failures,
/// identities_hold, witness_valid, identity_defect, witness_defect}.
Json verdict_json(const EquivalenceVerdict& v, const GroupTag& group, double tol);

/// The verdict document plus {type_x, type_y, s0, I_x, I_y}.
Json curve_verdict_json(const CurveVerdict& v, const GroupTag& group, double tol);

/// {type, A, B, a_I, tail_diagnostics: {left, right}}.
Json classification_json(const TypedInterval& ti);

/// {g, u, membership_defect, det}.
Json group_element_json(const GroupElement& h, const GroupTag& group);

/// Pretty JSON with a trailing newline.
std::string render_json(const Json& doc);

/// Flattened key,value rows of a JSON document. Keys are dotted paths with
/// [i] for array elements; a top-level "config" object is emitted first as
/// "# key=value" comment lines.
std::string render_csv(const Json& doc);

/// %.17g
std::string format_number(double v);

}  // namespace pscurve
