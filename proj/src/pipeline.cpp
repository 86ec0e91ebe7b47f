#include "ratgmp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "ratgmp/discriminant.hpp"
#include "ratgmp/errors.hpp"
#include "ratgmp/gmp.hpp"
#include "ratgmp/potential.hpp"
#include "ratgmp/regularity.hpp"

namespace ratgmp {

using io::json;

const std::vector<std::string>& all_stages() {
  static const std::vector<std::string> s = {"orthonormalize", "gmp", "potential", "discriminant", "regularity", "cesaro"};
  return s;
}

namespace {

bool has(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

bool poles_include_infinity(const json& poles) {
  if (poles.is_string()) return true;  // Ahlfors zeros end with infinity
  for (const auto& p : poles)
    if (p.is_string()) return true;
  return false;
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw ConfigError(std::string(what) + " must be a positive integer");
  return j.get<int>();
}

}  // namespace

PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig cfg;
  cfg.schema_version = j.value("schema_version", kConfigSchemaVersion);
  if (cfg.schema_version != kConfigSchemaVersion)
    throw ConfigError("unsupported config schema_version " + std::to_string(cfg.schema_version));

  if (j.contains("measure") && j.contains("measure_file")) throw ConfigError("give either measure or measure_file");
  if (j.contains("measure")) {
    cfg.measure = j.at("measure");
  } else if (j.contains("measure_file")) {
    std::filesystem::path p = j.at("measure_file").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError("measure file not found: " + p.string());
    cfg.measure = io::read_json(p);
  }
  cfg.poles = j.value("poles", json::array({"inf"}));
  if (cfg.poles.is_string() && cfg.poles.get<std::string>() != "ahlfors")
    throw ConfigError("poles must be an array or \"ahlfors\"");
  if (j.contains("set")) cfg.set = io::set_from_json(j.at("set"));
  if (j.contains("n_max")) cfg.n_max = positive_int(j.at("n_max"), "n_max");
  cfg.policy.truncate_on_rank_loss = true;
  if (j.contains("precision")) {
    const json& p = j.at("precision");
    cfg.policy.start_bits = p.value("start_bits", cfg.policy.start_bits);
    cfg.policy.max_bits = p.value("max_bits", cfg.policy.max_bits);
    cfg.policy.pivot_budget = p.value("pivot_budget", cfg.policy.pivot_budget);
    cfg.policy.truncate_on_rank_loss = p.value("truncate_on_rank_loss", cfg.policy.truncate_on_rank_loss);
  }
  if (j.contains("nodes")) cfg.nodes = positive_int(j.at("nodes"), "nodes");
  cfg.policy.nodes_per_band = cfg.nodes;
  if (j.contains("z_grid"))
    for (const auto& z : j.at("z_grid")) {
      if (!z.is_array() || z.size() != 2) throw ConfigError("z_grid entries are [re, im]");
      cfg.z_grid.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  if (j.contains("zero_ns"))
    for (const auto& n : j.at("zero_ns")) cfg.zero_ns.push_back(positive_int(n, "zero_ns entry"));
  if (j.contains("cesaro")) {
    const json& c = j.at("cesaro");
    CesaroConfig cc;
    cc.jacobi = c.value("jacobi", json{{"generator", "one_plus_inverse"}});
    cc.torus = c.value("torus", cc.torus);
    if (c.contains("n")) {
      cc.n.clear();
      if (c.at("n").is_array())
        for (const auto& n : c.at("n")) cc.n.push_back(positive_int(n, "cesaro n"));
      else cc.n.push_back(positive_int(c.at("n"), "cesaro n"));
    }
    if (c.contains("horizon")) cc.horizon = positive_int(c.at("horizon"), "cesaro horizon");
    cfg.cesaro = cc;
  }
  if (j.contains("magic_seed")) cfg.magic_seed = j.at("magic_seed");
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();

  if (j.contains("stages")) {
    for (const auto& s : j.at("stages")) {
      const auto name = s.get<std::string>();
      if (!has(all_stages(), name)) throw ConfigError("unknown stage \"" + name + "\"");
      cfg.stages.push_back(name);
    }
  } else {
    const bool measure = !cfg.measure.is_null();
    for (const auto& s : all_stages()) {
      if ((s == "orthonormalize" || s == "regularity") && !measure) continue;
      if (s == "gmp" && (!measure || !poles_include_infinity(cfg.poles))) continue;
      if ((s == "potential" || s == "discriminant") && !measure && !cfg.set) continue;
      if (s == "cesaro" && !cfg.cesaro) continue;
      cfg.stages.push_back(s);
    }
    if (cfg.stages.empty()) throw ConfigError("config selects no stage: give a measure, a set or a cesaro section");
  }
  // Keep the canonical order and check dependencies.
  std::vector<std::string> ordered;
  for (const auto& s : all_stages())
    if (has(cfg.stages, s)) ordered.push_back(s);
  cfg.stages = ordered;
  auto need = [&](const std::string& s, const std::string& dep) {
    if (has(cfg.stages, s) && !has(cfg.stages, dep))
      throw ConfigError("stage " + s + " requires stage " + dep);
  };
  need("gmp", "orthonormalize");
  need("discriminant", "potential");
  need("regularity", "orthonormalize");
  need("regularity", "potential");
  const bool needs_measure = has(cfg.stages, "orthonormalize");
  if (needs_measure && cfg.measure.is_null()) throw ConfigError("config has no measure");
  if (has(cfg.stages, "cesaro") && !cfg.cesaro) throw ConfigError("stage cesaro needs a cesaro section");
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& p) {
  return parse_config(io::read_json(p), p.has_parent_path() ? p.parent_path() : std::filesystem::path("."));
}

namespace {

struct Context {
  const PipelineConfig& cfg;
  std::ostream& log;
  std::filesystem::path out;
  std::optional<Measure> mu;
  std::optional<FiniteGapSet> e;
  std::optional<PoleSequence> c;
  std::optional<OrthoSystem> sys;
  std::optional<GmpFamily> fam;
  std::unique_ptr<GreenEvaluator> ge;
  std::optional<Discriminant> delta;
  json report;

  const FiniteGapSet& set() {
    if (!e) {
      if (cfg.set) e = cfg.set;
      else if (!cfg.measure.is_null()) {
        measure();
        e = mu->essential_gap_set();
        if (!e) throw ConfigError("measure essential support is not a finite gap set; give \"set\"");
      } else throw ConfigError("no finite gap set: give \"set\" or a measure");
    }
    return *e;
  }

  GreenEvaluator& green() {
    if (!ge) ge = std::make_unique<GreenEvaluator>(set(), cfg.nodes);
    return *ge;
  }

  const Discriminant& discriminant() {
    if (!delta) delta = fit_discriminant(set(), FitOptions{.nodes = cfg.nodes});
    return *delta;
  }

  const PoleSequence& poles() {
    if (!c) c = cfg.poles.is_string() ? discriminant().poles() : io::poles_from_json(cfg.poles);
    return *c;
  }

  const Measure& measure() {
    if (!mu) mu = io::measure_from_json(cfg.measure, cfg.nodes);
    return *mu;
  }
};

void stage_orthonormalize(Context& x) {
  x.sys = orthonormalize(x.measure(), x.poles(), x.cfg.n_max, x.cfg.policy);
  const OrthoSystem& s = *x.sys;
  io::write_json(x.out / "orf.json", io::summary_json(s));
  io::CsvWriter k(x.out / "kappa.csv", {"n", "kappa", "kappa_root"});
  for (int n = 0; n <= s.n_max(); ++n)
    k.row({double(n), s.kappa(n), n == 0 ? s.kappa(0) : std::exp(std::log(s.kappa(n)) / n)});
  io::CsvWriter t(x.out / "coefficients.csv", {"n", "l", "t"});
  for (int n = 0; n <= s.n_max(); ++n)
    for (int l = 0; l <= n; ++l) t.row({double(n), double(l), s.coefficient(n, l)});
  x.log << "orthonormalize: n_max " << s.n_max() << (s.truncated() ? " (truncated)" : "") << ", " << s.precision_bits()
        << " bits\n";
}

void stage_gmp(Context& x) {
  if (x.poles().infinity_slot() == 0) throw DomainError("gmp stage needs infinity among the poles");
  x.fam = build_family(*x.sys, x.cfg.policy);
  const GMPMatrix& a = x.fam->a;
  json out;
  out["structure"] = io::to_json(validate_structure(a));
  out["poles"] = io::to_json(a.poles());
  out["size"] = a.size();
  out["complete_rows"] = a.complete_rows();
  out["resolvent_structure"] = json::object();
  for (const auto& [k, r] : x.fam->resolvents)
    out["resolvent_structure"][std::to_string(k)] = io::to_json(validate_structure(r));
  const LambdaIdentity li = lambda_identity(*x.fam);
  out["lambda_identity_max_relative_error"] = li.max_relative_error;
  io::write_json(x.out / "gmp.json", out);

  std::vector<std::string> head;
  for (int i = 0; i < a.size(); ++i) head.push_back("c" + std::to_string(i));
  io::CsvWriter m(x.out / "gmp_matrix.csv", head);
  for (int i = 0; i < a.size(); ++i) {
    Eigen::VectorXd r = a.dense().row(i).transpose();
    m.row(std::vector<double>(r.data(), r.data() + r.size()));
  }
  const int s = a.genus() + 1;
  std::vector<std::string> pqh = {"j"};
  for (int i = 0; i < s; ++i) pqh.push_back("p" + std::to_string(i));
  for (int i = 0; i < s; ++i) pqh.push_back("q" + std::to_string(i));
  io::CsvWriter pq(x.out / "gmp_pq.csv", pqh);
  for (int j = 1; j <= a.block_count(); ++j) {
    const GmpCoefficients g = extract_pq(a, j);
    std::vector<double> row = {double(j)};
    for (int i = 0; i < s; ++i) row.push_back(g.p(i));
    for (int i = 0; i < s; ++i) row.push_back(g.q(i));
    pq.row(row);
  }
  io::CsvWriter b(x.out / "beta.csv", {"j", "beta"});
  const auto beta = beta_sequence(a);
  for (std::size_t j = 0; j < beta.size(); ++j) b.row({double(j), beta[j]});
  io::CsvWriter l(x.out / "lambda_identity.csv", {"n", "Lambda", "relative_error"});
  for (std::size_t n = 0; n < li.lambda.size(); ++n) l.row({double(n), li.lambda[n], li.relative_error[n]});
  x.log << "gmp: size " << a.size() << ", Lambda identity max relative error " << li.max_relative_error << "\n";
}

void stage_potential(Context& x) {
  GreenEvaluator& ge = x.green();
  const auto model = ge.frame(ExtendedReal::infinity());
  json out;
  out["set"] = io::to_json(x.set());
  out["capacity"] = model->capacity();
  out["robin"] = model->robin();
  out["numerator_zeros"] = model->numerator_zeros();
  out["gap_residuals"] = model->gap_residuals();
  const PoleSequence& c = x.poles();
  out["poles"] = json::array();
  for (int k = 1; k <= c.period(); ++k) {
    const GammaLambda gl = gamma_lambda(ge, c, k);
    out["poles"].push_back({{"pole", io::to_json(c.pole(k))}, {"gamma", gl.gamma}, {"log_lambda", gl.log_lambda}, {"lambda", gl.lambda}});
  }
  io::write_json(x.out / "potential.json", out);

  const auto grid = x.cfg.z_grid.empty() ? default_growth_grid(x.set()) : x.cfg.z_grid;
  io::CsvWriter g(x.out / "green_grid.csv", {"re", "im", "green_infinity", "calG"});
  for (const auto& z : grid) g.row({z.real(), z.imag(), ge.green(z, ExtendedReal::infinity()), calG(ge, c, z)});
  const auto bands = x.set().bands();
  for (std::size_t i = 0; i < bands.size(); ++i) {
    io::CsvWriter d(x.out / ("density_band" + std::to_string(i) + ".csv"), {"t", "density"});
    const int m = 200;
    for (int k = 1; k < m; ++k) {
      const double t = bands[i].mid() - bands[i].half() * std::cos(std::numbers::pi * k / m);
      d.row({t, model->density(t)});
    }
  }
  x.log << "potential: capacity " << model->capacity() << "\n";
}

void stage_discriminant(Context& x) {
  const Discriminant& d = x.discriminant();
  json out = io::to_json(d);
  out["preimage"] = io::to_json(check_preimage(d));
  const int s = d.genus() + 1;

  bool matched = false;
  if (x.fam) {
    const PoleSequence& c = x.fam->a.poles();
    matched = c.period() == s && c.infinity_slot() == s;
    for (int k = 1; matched && k < s; ++k)
      matched = std::abs(c.pole(k).value() - d.zeros()[k - 1]) <= 1e-9 * d.set().scale();
  }
  Eigen::VectorXd p0 = Eigen::VectorXd::Constant(s, 1.0 / d.lambdas().back());
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(s);
  if (matched) {
    const BlockJacobi bj = apply_to_gmp(d, *x.fam);
    out["block_jacobi"] = io::to_json(bj, magic_residual(bj));
    const int last = x.fam->a.block_count();
    if (last >= 1) {
      const GmpCoefficients g = extract_pq(x.fam->a, last);
      p0 = g.p;
      q0 = g.q;
    }
  }
  if (x.cfg.magic_seed) {
    const auto p = x.cfg.magic_seed->at("p").get<std::vector<double>>();
    const auto q = x.cfg.magic_seed->at("q").get<std::vector<double>>();
    if (static_cast<int>(p.size()) != s || static_cast<int>(q.size()) != s) throw ConfigError("magic_seed has the wrong length");
    p0 = Eigen::Map<const Eigen::VectorXd>(p.data(), s);
    q0 = Eigen::Map<const Eigen::VectorXd>(q.data(), s);
  }
  out["magic_solve"] = io::to_json(magic_solve(d, p0, q0));
  io::write_json(x.out / "discriminant.json", out);
  x.log << "discriminant: lambdas";
  for (double l : d.lambdas()) x.log << ' ' << l;
  x.log << ", d " << d.d() << "\n";
}

void stage_regularity(Context& x) {
  RegularityOptions opt;
  if (!x.cfg.z_grid.empty()) opt.z_grid = x.cfg.z_grid;
  if (!x.cfg.zero_ns.empty()) opt.zero_ns = x.cfg.zero_ns;
  const RegularityReport r = assess(*x.sys, x.fam ? &x.fam->a : nullptr, x.green(), opt);
  io::write_json(x.out / "regularity.json", io::to_json(r));
  for (std::size_t k = 0; k < r.kappa->per_class.size(); ++k) {
    io::CsvWriter w(x.out / ("kappa_class" + std::to_string(k + 1) + ".csv"), {"n", "kappa_root", "target"});
    const Trend& t = r.kappa->per_class[k];
    for (std::size_t i = 0; i < t.value.size(); ++i) w.row({double(t.index[i]), t.value[i], t.target});
  }
  if (r.beta) {
    io::CsvWriter w(x.out / "beta_product.csv", {"j", "root_product", "target"});
    for (std::size_t i = 0; i < r.beta->trend.value.size(); ++i)
      w.row({double(r.beta->trend.index[i]), r.beta->trend.value[i], r.beta->trend.target});
  }
  {
    io::CsvWriter w(x.out / "growth.csv", {"re", "im", "calG", "min_deviation", "class_spread"});
    for (const auto& p : r.growth->points) w.row({p.z.real(), p.z.imag(), p.calg, p.min_deviation, p.class_spread});
  }
  if (r.zeros) {
    io::CsvWriter w(x.out / "zero_distribution.csv", {"n", "sup_cdf_distance", "zero_count"});
    for (std::size_t i = 0; i < r.zeros->n.size(); ++i)
      w.row({double(r.zeros->n[i]), r.zeros->distance[i], double(r.zeros->zero_count[i])});
  }
  x.report["verdict"] = to_string(r.verdict);
  x.log << "regularity: " << to_string(r.verdict) << "\n";
}

JacobiMatrix jacobi_from_config(Context& x, const json& j, int length) {
  if (j.contains("a") || j.contains("b"))
    return JacobiMatrix(j.at("a").get<std::vector<double>>(), j.at("b").get<std::vector<double>>());
  if (j.contains("source") && j.at("source") == "gmp") {
    if (!x.fam) throw ConfigError("cesaro jacobi source gmp needs the gmp stage");
    return JacobiMatrix::from_gmp(x.fam->a);
  }
  const std::string gen = j.value("generator", "one_plus_inverse");
  const int n = j.value("length", length);
  std::vector<double> a, b(static_cast<std::size_t>(n), 0.0);
  for (int m = 1; m <= n; ++m) {
    if (gen == "one_plus_inverse") a.push_back(1.0 + 1.0 / m);
    else if (gen == "free") a.push_back(1.0);
    else if (gen == "decaying_sqrt") a.push_back(std::exp(-std::sqrt(double(m))));
    else throw ConfigError("unknown Jacobi generator \"" + gen + "\"");
  }
  return JacobiMatrix(std::move(a), std::move(b));
}

void stage_cesaro(Context& x) {
  const CesaroConfig& cc = *x.cfg.cesaro;
  const int nmax = *std::max_element(cc.n.begin(), cc.n.end());
  const JacobiMatrix j = jacobi_from_config(x, cc.jacobi, nmax + cc.horizon);
  const FiniteGapSet e = x.cfg.set ? *x.cfg.set : FiniteGapSet({{-2.0, 2.0}});
  if (cc.torus != "free" && cc.torus != "symmetric_two_band") throw ConfigError("unknown torus \"" + cc.torus + "\"");
  const TorusSampleSet t = cc.torus == "free" ? TorusSampleSet::free_type(e, cc.horizon)
                                              : TorusSampleSet::symmetric_two_band(e, 64, cc.horizon);
  json out;
  out["torus"] = t.method;
  out["samples"] = t.samples.size();
  out["runs"] = json::array();
  std::vector<int> ns = cc.n;
  std::sort(ns.begin(), ns.end());
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int n : ns) {
    const CesaroSection s = cesaro_stat(j, t, n, cc.horizon);
    out["runs"].push_back(io::to_json(s));
    monotone = monotone && s.l1 <= prev;
    prev = s.l1;
  }
  out["monotone_decreasing"] = monotone;
  io::write_json(x.out / "cesaro.json", out);
  x.log << "cesaro: " << ns.size() << " averages, monotone " << (monotone ? "yes" : "no") << "\n";
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Invariant: return "invariant";
  }
  return "unknown";
}

}  // namespace

PipelineOutcome run_pipeline(const PipelineConfig& cfg, std::ostream& log) {
  std::filesystem::create_directories(cfg.output_dir);
  std::filesystem::remove(cfg.output_dir / "error.json");
  Context x{cfg, log, cfg.output_dir, {}, {}, {}, {}, {}, {}, {}, json::object()};
  x.report["schema_version"] = kConfigSchemaVersion;
  x.report["stages"] = cfg.stages;
  PipelineOutcome outcome;
  std::string current = "setup";
  auto fail = [&](const std::string& kind, int code, const std::string& msg) {
    const json err = {{"stage", current}, {"kind", kind}, {"message", msg}, {"exit_code", code}};
    io::write_json(x.out / "error.json", err);
    x.report["status"] = "error";
    x.report["error"] = err;
    outcome.exit_code = code;
    log << "error in stage " << current << " (" << kind << "): " << msg << "\n";
  };
  try {
    for (const auto& s : cfg.stages) {
      current = s;
      if (s == "orthonormalize") stage_orthonormalize(x);
      else if (s == "gmp") stage_gmp(x);
      else if (s == "potential") stage_potential(x);
      else if (s == "discriminant") stage_discriminant(x);
      else if (s == "regularity") stage_regularity(x);
      else if (s == "cesaro") stage_cesaro(x);
    }
    x.report["status"] = "ok";
  } catch (const Error& e) {
    fail(kind_name(e.kind()), exit_code(e.kind()), e.what());
  } catch (const json::exception& e) {
    fail("config", exit_code(ErrorKind::Config), e.what());
  } catch (const std::exception& e) {
    fail("numerical", exit_code(ErrorKind::Numerical), e.what());
  }
  io::write_json(x.out / "report.json", x.report);
  outcome.report = x.report;
  return outcome;
}

}  // namespace ratgmp
