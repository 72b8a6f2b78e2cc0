#include "gowers/io.hpp"

#include <fstream>
#include <sstream>

#include "gowers/error.hpp"

namespace gowers::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v <= 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    usage_fail(what + ": expected a positive integer, got '" + s + "'");
  }
}

json complex_array(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

}  // namespace

DomainSpec parse_domain(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() < 2) usage_fail("domain '" + text + "': expected kind:params");
  const std::string& kind = parts[0];
  if (kind == "cyclic" && parts.size() == 2) return DomainSpec::cyclic(parse_size(parts[1], "cyclic order"));
  if (kind == "group" && parts.size() == 2) {
    std::vector<std::size_t> moduli;
    for (const auto& m : split(parts[1], 'x')) moduli.push_back(parse_size(m, "group modulus"));
    return DomainSpec::group(std::move(moduli));
  }
  if (kind == "interval" && parts.size() == 2) return DomainSpec::interval(parse_size(parts[1], "interval length"));
  if (kind == "grid" && parts.size() == 4) {
    double extent = 0;
    try {
      extent = std::stod(parts[2]);
    } catch (const std::exception&) {
      usage_fail("grid extent: expected a number, got '" + parts[2] + "'");
    }
    return DomainSpec::grid(parse_size(parts[1], "grid dimension"), extent, parse_size(parts[3], "grid points"));
  }
  usage_fail("domain '" + text + "': unrecognised (cyclic:N, group:AxB, interval:N, grid:dim:extent:points)");
}

json to_json(const DomainSpec& d) {
  if (d.is_group()) return {{"kind", "group"}, {"moduli", d.shape()}};
  if (d.is_interval()) return {{"kind", "interval"}, {"length", d.cardinality()}};
  const auto& g = d.grid_params();
  return {{"kind", "grid"}, {"dim", g.dim}, {"extent", g.extent}, {"points", g.points}};
}

DomainSpec domain_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "group") return DomainSpec::group(j.at("moduli").get<std::vector<std::size_t>>());
    if (kind == "cyclic") return DomainSpec::cyclic(j.at("n").get<std::size_t>());
    if (kind == "interval") return DomainSpec::interval(j.at("length").get<std::size_t>());
    if (kind == "grid")
      return DomainSpec::grid(j.at("dim").get<std::size_t>(), j.at("extent").get<double>(),
                              j.at("points").get<std::size_t>());
    usage_fail("domain kind '" + kind + "' unrecognised");
  } catch (const json::exception& e) {
    usage_fail(std::string("domain: malformed JSON (") + e.what() + ")");
  }
}

json to_json(const Signal& f) { return {{"domain", to_json(f.domain)}, {"values", complex_array(f.values)}}; }

Signal signal_from_json(const json& j) {
  try {
    const DomainSpec d = domain_from_json(j.at("domain"));
    const auto& vals = j.at("values");
    if (!vals.is_array()) usage_fail("signal: 'values' must be an array");
    std::vector<cplx> v;
    v.reserve(vals.size());
    for (const auto& z : vals) {
      if (z.is_number()) {
        v.emplace_back(z.get<double>(), 0.0);
      } else {
        if (!z.is_array() || z.size() != 2) usage_fail("signal: each value must be [re, im]");
        v.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
    }
    return Signal(d, std::move(v));
  } catch (const json::exception& e) {
    usage_fail(std::string("signal: malformed JSON (") + e.what() + ")");
  }
}

json to_json(const PolyPhase& p) {
  json j{{"degree", p.degree}};
  j["coeffs"] = p.coeffs ? json(*p.coeffs) : json(nullptr);
  j["table"] = p.table;
  return j;
}

PolyPhase phase_from_json(const json& j, const DomainSpec& d) {
  try {
    PolyPhase p{d, j.at("degree").get<int>(), j.at("table").get<std::vector<double>>(), std::nullopt};
    if (j.contains("coeffs") && !j["coeffs"].is_null()) p.coeffs = j["coeffs"].get<std::vector<double>>();
    if (p.table.size() != d.cardinality()) usage_fail("phase: table length does not match the domain");
    return p;
  } catch (const json::exception& e) {
    usage_fail(std::string("phase: malformed JSON (") + e.what() + ")");
  }
}

json to_json(const Tolerances& t) {
  return {{"poly", t.poly},
          {"mag_clamp", t.mag_clamp},
          {"accept_scale", t.accept_scale},
          {"negative_clamp", t.negative_clamp},
          {"level_set", t.level_set},
          {"intersection_cap", t.intersection_cap},
          {"direct_work_cap", t.direct_work_cap},
          {"boundary_mass", t.boundary_mass},
          {"nyquist_mass", t.nyquist_mass},
          {"heisenberg_tail", t.heisenberg_tail},
          {"scan_cap", t.scan_cap},
          {"enum_cap", t.enum_cap}};
}

json to_json(const NormResult& r) {
  json j{{"k", r.k}, {"value", r.value}, {"backend", backend_name(r.backend)}, {"work_count", r.work_count}};
  if (r.ambient) j["ambient"] = r.ambient;
  if (r.backend == Backend::grid) j["boundary_fraction"] = r.boundary_fraction;
  return j;
}

json to_json(const DecodeReport& r) {
  json j{{"status", status_name(r.status)},
         {"message", r.message},
         {"constant", {r.constant.real(), r.constant.imag()}},
         {"residual_l1", r.residual_l1},
         {"certification_defect", r.certification_defect}};
  j["phase"] = r.ok() ? to_json(r.phase) : json(nullptr);
  json lv = json::array();
  for (const auto& l : r.levels)
    lv.push_back({{"k", l.k},
                  {"decodes", l.decodes},
                  {"acceptance_fraction", l.acceptance_fraction},
                  {"max_cocycle_defect", l.max_cocycle_defect},
                  {"max_corrector", l.max_corrector}});
  j["levels"] = lv;
  j["uncovered"] = r.uncovered ? json(*r.uncovered) : json(nullptr);
  if (r.cocycle) {
    j["cocycle"] = {{"max_deviation", r.cocycle->max_deviation},
                    {"max_coboundary_defect", r.cocycle->max_coboundary_defect},
                    {"b", r.cocycle->b}};
  }
  return j;
}

json to_json(const CosetReport& r) {
  const auto& d = r.detection;
  json j{{"ok", r.ok}, {"message", r.message}};
  j["detection"] = {{"ok", d.ok},
                    {"message", d.message},
                    {"offset", d.coset.offset},
                    {"subgroup", d.coset.elements},
                    {"magnitude_residual", d.magnitude_residual},
                    {"uk", d.uk},
                    {"level_set_size", d.level_set_size},
                    {"stabilizer_size", d.stabilizer_size},
                    {"sumset_ratio", d.sumset_ratio}};
  j["basis"] = {{"generators", r.basis.generators}, {"orders", r.basis.orders}};
  j["c"] = {r.c.real(), r.c.imag()};
  j["total_residual"] = r.total_residual;
  j["phase"] = r.ok ? to_json(r.phase) : json(nullptr);
  j["decode"] = to_json(r.decode);
  return j;
}

json to_json(const SharpnessReport& r) {
  return {{"d", r.d},
          {"extent", r.extent},
          {"points", r.points},
          {"uk", r.uk},
          {"lp", r.lp},
          {"ratio", r.ratio},
          {"constant", r.constant},
          {"error", r.error},
          {"refinement_points", r.refinement_points},
          {"refinement_errors", r.refinement_errors},
          {"refinement_decreasing", r.refinement_decreasing},
          {"observed_order", r.observed_order}};
}

json to_json(const FourierInvariance& r) {
  return {{"u3", r.u3}, {"u3_hat", r.u3_hat}, {"diff", r.diff}, {"nyquist_fraction", r.nyquist_fraction}};
}

json to_json(const ScanResult& r) {
  return {{"denominator", r.denominator}, {"a", r.a},         {"b", r.b},
          {"max_corr", r.max_corr},       {"mean_corr", r.mean_corr}, {"histogram", r.histogram}};
}

json to_json(const SeparationResult& r) {
  return {{"n", r.n},
          {"k", r.k},
          {"enumerated", r.enumerated},
          {"min_distance", r.min_distance},
          {"bound", r.bound},
          {"holds", r.holds()},
          {"argmin_coeffs", r.argmin_coeffs}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_fail("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    usage_fail("'" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) usage_fail("cannot write '" + path + "'");
  out << text;
  if (!out) throw ComputationError("write to '" + path + "' failed");
}

Signal read_signal(const std::string& path) { return signal_from_json(read_json_file(path)); }

}  // namespace gowers::io
