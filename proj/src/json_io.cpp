#include "milnor/json_io.hpp"

#include <charconv>

#include "milnor/errors.hpp"

namespace milnor {
namespace {

Json subset_json(const Subset& s) {
  Json out = Json::array();
  for (int i : s) out.push_back(i + 1);
  return out;
}

Json point_json(const Point& z) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < z.size(); ++j) out.push_back(Json::array({z[j].real(), z[j].imag()}));
  return out;
}

std::vector<int> int_array(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InputError(std::string(what) + " entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const MixedPolynomial& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"nu", t.nu}, {"mu", t.mu}});
  return {{"n", f.num_vars()}, {"terms", terms}};
}

MixedPolynomial polynomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
    throw InputError("polynomial JSON needs \"n\" and \"terms\"");
  if (!j["n"].is_number_integer()) throw InputError("\"n\" must be an integer");
  const int n = j["n"].get<int>();
  if (!j["terms"].is_array()) throw InputError("\"terms\" must be an array");
  std::vector<MixedTerm> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_object()) throw InputError("each term must be an object");
    const double re = t.value("re", 0.0);
    const double im = t.value("im", 0.0);
    if (!t.contains("nu") || !t.contains("mu")) throw InputError("terms need \"nu\" and \"mu\"");
    terms.push_back({Complex(re, im), int_array(t["nu"], "nu"), int_array(t["mu"], "mu")});
  }
  return MixedPolynomial(n, std::move(terms));
}

Json to_json(const NewtonData& data) {
  Json support = Json::array();
  for (const auto& e : data.radial_support) support.push_back(e);
  Json vanishing = Json::array();
  for (const auto& s : data.vanishing_subspaces) vanishing.push_back(subset_json(s));
  Json non_vanishing = Json::array();
  for (const auto& s : data.non_vanishing_subspaces) non_vanishing.push_back(subset_json(s));
  return {{"radial_support", support},
          {"convenient", data.convenient},
          {"vanishing_subspaces", vanishing},
          {"non_vanishing_subspaces", non_vanishing}};
}

Json to_json(const DegeneracyReport& report) {
  return {{"face", report.face.p},
          {"verdict", to_string(report.verdict)},
          {"witness", report.witness ? point_json(*report.witness) : Json(nullptr)},
          {"residual", report.residual},
          {"trials", report.trials}};
}

Json to_json(const SampledPath& path) {
  Json nodes = Json::array();
  for (const auto& z : path.nodes) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      row.push_back(z[j].real());
      row.push_back(z[j].imag());
    }
    nodes.push_back(std::move(row));
  }
  return {{"nodes", nodes}, {"psi", path.psi}};
}

void write_fiber_csv(std::ostream& out, const std::vector<FiberPoint>& points) {
  for (const auto& p : points) {
    for (Eigen::Index j = 0; j < p.z.size(); ++j)
      out << format_double(p.z[j].real()) << ',' << format_double(p.z[j].imag()) << ',';
    out << format_double(p.residual) << '\n';
  }
}

Json to_json(const ComponentReport& report, const std::string& points_csv) {
  Json edges = Json::array();
  for (const auto& e : report.edges) edges.push_back(Json::array({e.a, e.b}));
  return {{"component_count", report.component_count},
          {"component_sizes", report.component_sizes},
          {"points_csv", points_csv},
          {"edges", edges},
          {"caveat", ComponentReport::caveat}};
}

void write_roots_csv(std::ostream& out, const std::vector<LensRoot>& roots) {
  for (const auto& r : roots)
    out << format_double(r.z.real()) << ',' << format_double(r.z.imag()) << ','
        << format_double(r.residual) << '\n';
}

Json lens_summary(int n, std::size_t count) {
  return {{"n", n},
          {"count", count},
          {"expected", "5n-5"},
          {"match", static_cast<int>(count) == expected_root_count(n)}};
}

}  // namespace milnor
