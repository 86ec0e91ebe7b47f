#include "ratgmp/io.hpp"

#include <iomanip>
#include <limits>

#include "ratgmp/errors.hpp"

namespace ratgmp::io {

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string("expected a number for ") + what);
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("expected an array for ") + what);
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

std::vector<Interval> intervals(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("expected [[lo, hi], ...] for ") + what);
  std::vector<Interval> out;
  for (const auto& b : j) {
    const auto v = numbers(b, what);
    if (v.size() != 2) throw ConfigError(std::string("interval needs two numbers in ") + what);
    if (!(std::isfinite(v[0]) && std::isfinite(v[1]) && v[0] < v[1]))
      throw ConfigError(std::string("interval needs finite lo < hi in ") + what);
    out.push_back({v[0], v[1]});
  }
  return out;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

ExtendedReal extended_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return ExtendedReal::infinity();
    throw ConfigError("unrecognized extended real \"" + s + "\"");
  }
  return ExtendedReal(number(j, "extended real"));
}

json to_json(const ExtendedReal& x) { return x.is_infinite() ? json("inf") : json(x.value()); }

FiniteGapSet set_from_json(const json& j) { return FiniteGapSet(intervals(j, "set")); }

json to_json(const FiniteGapSet& e) {
  json out = json::array();
  for (const auto& b : e.bands()) out.push_back({b.lo, b.hi});
  return out;
}

Measure measure_from_json(const json& j, int nodes) {
  if (!j.is_object()) throw ConfigError("measure document must be an object");
  std::vector<std::pair<double, Measure>> parts;
  std::vector<Interval> bands;
  if (j.contains("bands")) bands = intervals(j.at("bands"), "bands");

  if (!bands.empty()) {
    const json dens = j.value("density", json("arcsine"));
    const double cw = j.contains("continuous_weight") ? number(j.at("continuous_weight"), "continuous_weight") : 1.0;
    if (dens.is_string() && dens.get<std::string>() == "arcsine") {
      std::vector<double> bw(bands.size(), 1.0);
      if (j.contains("band_weights")) bw = numbers(j.at("band_weights"), "band_weights");
      if (bw.size() != bands.size()) throw ConfigError("band_weights must match bands");
      double tot = 0.0;
      for (double w : bw) tot += w;
      for (std::size_t i = 0; i < bands.size(); ++i)
        parts.emplace_back(cw * bw[i] / tot, Measure::arcsine(bands[i]));
    } else if (dens.is_string() && dens.get<std::string>() == "equilibrium") {
      const FiniteGapSet e(bands);
      parts.emplace_back(cw, EquilibriumModel(e, nodes).measure());
    } else if (dens.is_object() && dens.value("type", "") == "chebyshev") {
      const FiniteGapSet e(bands);
      parts.emplace_back(cw, Measure::chebyshev_type(e, numbers(dens.at("numerator_roots"), "numerator_roots"), nodes));
    } else if (dens.is_object() && dens.value("type", "") == "sampled") {
      const json& nn = dens.at("nodes");
      const json& ww = dens.at("weights");
      if (nn.size() != bands.size() || ww.size() != bands.size())
        throw ConfigError("sampled density needs nodes and weights per band");
      std::vector<std::pair<double, Measure>> sub;
      double tot = 0.0;
      for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto w = numbers(ww[i], "weights");
        double m = 0.0;
        for (double x : w) m += x;
        tot += m;
        sub.emplace_back(m, Measure::sampled(bands[i], numbers(nn[i], "nodes"), w));
      }
      for (auto& [m, mu] : sub) parts.emplace_back(cw * m / tot, std::move(mu));
    } else {
      throw ConfigError("unknown density description");
    }
  }
  if (j.contains("atoms")) {
    std::vector<Atom> atoms;
    double tot = 0.0;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) throw ConfigError("atoms are [x, w] pairs");
      atoms.push_back({extended_from_json(a[0]), number(a[1], "atom weight")});
      tot += atoms.back().weight;
    }
    if (!atoms.empty()) parts.emplace_back(tot, Measure::atomic(std::move(atoms)));
  }
  if (parts.empty()) throw ConfigError("measure has neither bands nor atoms");

  std::optional<std::vector<SupportArc>> ess;
  if (j.contains("essential_support")) {
    ess.emplace();
    for (const auto& b : intervals(j.at("essential_support"), "essential_support"))
      ess->push_back({ExtendedReal(b.lo), ExtendedReal(b.hi)});
  }
  if (parts.size() == 1 && !ess) return parts.front().second;
  return Measure::mixture(parts, ess);
}

json to_json(const Measure& mu) {
  json out;
  out["atoms"] = json::array();
  for (const auto& a : mu.atoms()) out["atoms"].push_back({to_json(a.position), a.weight});
  out["essential_support"] = json::array();
  for (const auto& arc : mu.essential_support()) out["essential_support"].push_back({to_json(arc.from), to_json(arc.to)});
  out["parts"] = json::array();
  for (const auto& p : mu.parts()) {
    json q;
    q["base"] = {p.base.lo, p.base.hi};
    q["map"] = {p.map.a(), p.map.b(), p.map.c(), p.map.d()};
    q["scale"] = p.scale;
    q["support"] = {to_json(p.support().from), to_json(p.support().to)};
    if (const auto* c = std::get_if<ChebyshevDensity>(&p.density)) {
      q["density"] = {{"type", "chebyshev"}, {"endpoints", c->endpoints}, {"numerator_roots", c->numerator_roots},
                      {"numerator_scale", c->numerator_scale}};
    } else {
      const auto& s = std::get<SampledDensity>(p.density);
      q["density"] = {{"type", "sampled"}, {"nodes", s.nodes}, {"weights", s.weights}};
    }
    out["parts"].push_back(q);
  }
  return out;
}

PoleSequence poles_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("poles must be a nonempty array");
  std::vector<ExtendedReal> pts;
  for (const auto& x : j) pts.push_back(extended_from_json(x));
  return PoleSequence(std::move(pts));
}

json to_json(const PoleSequence& c) {
  json out = json::array();
  for (const auto& p : c.points()) out.push_back(to_json(p));
  return out;
}

json to_json(const PrecisionAttempt& a) {
  return {{"bits", a.bits},
          {"min_scaled_pivot", a.min_scaled_pivot},
          {"condition_estimate", a.condition_estimate},
          {"reliable_n", a.reliable_n},
          {"orthonormality_defect", a.orthonormality_defect},
          {"rank", a.rank},
          {"accepted", a.accepted},
          {"reason", a.reason}};
}

json summary_json(const OrthoSystem& sys) {
  json out;
  out["poles"] = to_json(sys.poles());
  out["requested_n"] = sys.requested_n();
  out["n_max"] = sys.n_max();
  out["truncated"] = sys.truncated();
  out["precision_bits"] = sys.precision_bits();
  out["orthonormality_defect"] = sys.orthonormality_defect();
  out["min_scaled_pivot"] = sys.min_scaled_pivot();
  out["nodes_per_band"] = sys.nodes_per_band();
  out["attempts"] = json::array();
  for (const auto& a : sys.attempts()) out["attempts"].push_back(to_json(a));
  out["kappa"] = sys.kappas();
  return out;
}

json to_json(const StructureReport& r) {
  return {{"symmetry_defect", r.symmetry_defect},
          {"bandwidth_residual", r.bandwidth_residual},
          {"max_rank_one_ratio", r.max_rank_one_ratio},
          {"min_p0", r.min_p0},
          {"max_reconstruction_residual", r.max_reconstruction_residual},
          {"blocks_checked", r.blocks_checked},
          {"ok", r.ok()}};
}

json to_json(const Discriminant& d) {
  return {{"set", to_json(d.set())},
          {"lambdas", d.lambdas()},
          {"d", d.d()},
          {"zeros", d.zeros()},
          {"endpoint_residuals", d.endpoint_residuals()},
          {"newton_iterations", d.newton_iterations},
          {"residue_cross_check", d.residue_cross_check}};
}

json to_json(const PreimageCheck& p) {
  return {{"max_band_excess", p.max_band_excess}, {"min_outside_abs", p.min_outside_abs}, {"ok", p.ok()}};
}

json to_json(const BlockJacobi& j, const MagicResidual& m) {
  json out;
  out["block_size"] = j.block_size();
  out["type3_defect"] = j.type3_defect;
  out["det_identity_error"] = j.det_identity_error;
  out["det_v"] = j.det_v;
  out["magic"] = {{"first", m.first}, {"last", m.last}, {"h_plus", m.h_plus}, {"block_contribution", m.block_contribution}};
  return out;
}

json to_json(const PeriodicGmp& p) {
  return {{"p", std::vector<double>(p.p.data(), p.p.data() + p.p.size())},
          {"q", std::vector<double>(p.q.data(), p.q.data() + p.q.size())},
          {"residual", p.residual},
          {"lambda_big_lambda", p.lambda_big_lambda},
          {"evaluations", p.evaluations}};
}

json to_json(const Trend& t) {
  return {{"index", t.index},        {"value", t.value},
          {"target", t.target},      {"last", t.last},
          {"deviation", t.deviation}, {"extrapolated", t.extrapolated},
          {"verdict", to_string(t.verdict)}};
}

json to_json(const KappaSection& s) {
  json out;
  out["criterion"] = s.criterion;
  out["lambdas"] = s.lambdas;
  out["per_class"] = json::array();
  for (const auto& t : s.per_class) out["per_class"].push_back(to_json(t));
  out["product"] = to_json(s.product);
  out["alpha"] = s.alpha;
  out["lower_bound_slack"] = s.lower_bound_slack;
  out["lower_bound_ok"] = s.lower_bound_ok;
  out["truncated"] = s.truncated;
  out["verdict"] = to_string(s.verdict);
  return out;
}

json to_json(const BetaSection& s) {
  return {{"lambda", s.lambda},
          {"trend", to_json(s.trend)},
          {"upper_bound_slack", s.upper_bound_slack},
          {"upper_bound_ok", s.upper_bound_ok},
          {"verdict", to_string(s.verdict)}};
}

json to_json(const GrowthSection& s) {
  json out;
  out["points"] = json::array();
  for (const auto& p : s.points)
    out["points"].push_back({{"z", complex_json(p.z)},
                             {"calG", p.calg},
                             {"n", p.n},
                             {"h", p.h},
                             {"min_deviation", p.min_deviation},
                             {"max_abs_deviation", p.max_abs_deviation},
                             {"class_spread", p.class_spread}});
  out["lower_bound_slack"] = s.lower_bound_slack;
  out["lower_bound_ok"] = s.lower_bound_ok;
  out["max_class_spread"] = s.max_class_spread;
  out["verdict"] = to_string(s.verdict);
  return out;
}

json to_json(const ZeroDistSection& s) {
  return {{"n", s.n},
          {"distance", s.distance},
          {"zero_count", s.zero_count},
          {"mass_bound_ok", s.mass_bound_ok},
          {"trend_ok", s.trend_ok}};
}

json to_json(const RegularityReport& r) {
  json out;
  if (r.kappa) out["kappa"] = to_json(*r.kappa);
  if (r.beta) out["beta"] = to_json(*r.beta);
  if (r.growth) out["growth"] = to_json(*r.growth);
  if (r.zeros) out["zeros"] = to_json(*r.zeros);
  out["verdict"] = to_string(r.verdict);
  out["notes"] = r.notes;
  return out;
}

json to_json(const CesaroSection& s) {
  json out = {{"n", s.n},
              {"horizon", s.horizon},
              {"l1", s.l1},
              {"l2", s.l2},
              {"tail_bound", s.tail_bound},
              {"cauchy_schwarz_ok", s.cauchy_schwarz_ok}};
  if (s.block_l1) out["block_l1"] = *s.block_l1;
  if (s.block_l2) out["block_l2"] = *s.block_l2;
  return out;
}

json to_json(const SparseStats& s) {
  return {{"n", s.n}, {"delta", s.delta}, {"average", s.average}, {"density", s.density}, {"markov_ok", s.markov_ok}};
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + p.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

CsvWriter::CsvWriter(const std::filesystem::path& p, const std::vector<std::string>& header)
    : out_(p), columns_(header.size()) {
  if (!out_) throw ConfigError("cannot write " + p.string());
  out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw InvariantViolation("CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
  out_ << '\n';
  return *this;
}

}  // namespace ratgmp::io
