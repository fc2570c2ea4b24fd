#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "milnor/connectivity.hpp"
#include "milnor/fibration.hpp"
#include "milnor/lens.hpp"
#include "milnor/mixed_polynomial.hpp"
#include "milnor/newton_polyhedron.hpp"

namespace milnor {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// {"n": int, "terms": [{"re", "im", "nu": [..], "mu": [..]}]}
Json to_json(const MixedPolynomial& f);
/// Throws InputError on a malformed document.
MixedPolynomial polynomial_from_json(const Json& j);

/// Subsets are written 1-based.
Json to_json(const NewtonData& data);

/// {"face", "verdict", "witness": [[re, im], ...] | null, "residual", "trials"}
Json to_json(const DegeneracyReport& report);

/// {"nodes": [[re, im, ...], ...], "psi": [...]}
Json to_json(const SampledPath& path);

/// One row per point: re(z1),im(z1),...,re(zn),im(zn),residual.
void write_fiber_csv(std::ostream& out, const std::vector<FiberPoint>& points);

/// {"component_count", "component_sizes", "points_csv", "edges": [[i, j]], "caveat"}
Json to_json(const ComponentReport& report, const std::string& points_csv);

/// Rows re,im,residual.
void write_roots_csv(std::ostream& out, const std::vector<LensRoot>& roots);

/// {"n", "count", "expected": "5n-5", "match"}
Json lens_summary(int n, std::size_t count);

}  // namespace milnor
