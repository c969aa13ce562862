#include "qmonoidal/cli.hpp"

#include "qmonoidal/acceptance.hpp"
#include "qmonoidal/cache.hpp"
#include "qmonoidal/cocycle.hpp"
#include "qmonoidal/linking.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

namespace qmon {

namespace {

struct Config {
  Tolerances tol;
  std::string format = "json";
  int jobs = 0;
  std::uint64_t seed = 2024;
  std::string cache_dir;
};

struct Report {
  std::string command;
  json inputs = json::object();
  json results = json::object();
  json checks = json::array();
  json extra = json::object();  // cache status and timings, not part of the payload

  bool pass() const {
    for (const json& c : checks)
      if (!c["pass"].get<bool>()) return false;
    return true;
  }
  void check(const std::string& name, double residual, double tolerance) {
    checks.push_back({{"name", name}, {"residual", residual}, {"tolerance", tolerance}, {"pass", residual <= tolerance}});
  }
  void flag(const std::string& name, bool ok) { checks.push_back({{"name", name}, {"pass", ok}}); }
};

void round_json(json& j) {
  if (j.is_number_float()) {
    j = round_sig(j.get<double>(), 12);
  } else if (j.is_structured()) {
    for (auto& v : j) round_json(v);
  }
}

std::string word_key(const Word& w, Variant v) {
  return v == Variant::ao ? std::to_string(w.size()) : w;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NotAoAdmissible:
    case ErrorKind::NotNormalized:
    case ErrorKind::SingularMatrix:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::Infeasible:
    case ErrorKind::PreconditionFailed:
    case ErrorKind::NotMonoidallyEquivalent:
    case ErrorKind::BetaMismatch:
    case ErrorKind::LevelCapExceeded:
    case ErrorKind::OddParity:
      return kExitInput;
    default:
      return kExitCheckFailed;
  }
}

Variant parse_variant(const std::string& s) {
  if (s == "ao") return Variant::ao;
  if (s == "au") return Variant::au;
  throw Error(ErrorKind::InvalidInput, "variant must be ao or au");
}

Realization realize(const Mat& f, Variant v, const Tolerances& tol, int cap = 0) {
  if (v == Variant::ao) return Realization::ao(FMatrix(f, tol), tol, cap);
  return Realization::au(normalize_au(FMatrix(f, tol), tol), tol, cap);
}

void add_input(Report& r, const std::string& name, const Mat& m) { r.inputs[name] = matrix_to_json(m); }

// ---- subcommands -------------------------------------------------------

void classify_ao(const Config& c, const std::string& input, Report& r) {
  const Mat f = read_matrix_file(input);
  add_input(r, "F", f);
  const FMatrix fm(f, c.tol);
  const AoParams p = validate_ao(fm, c.tol);
  const FMatrix fn = normalize_ao(fm, c.tol);
  const CanonicalFormAo cf = canonical_form_ao(fn, c.tol);
  const double cres = rel_residual(cf.transition.transpose() * fn.matrix() * cf.transition, cf.canonical());
  r.results = {{"admissible", true},
               {"c", p.c},
               {"sign", p.sign},
               {"trace", p.trace},
               {"beta", p.beta},
               {"qdim", p.qdim},
               {"canonical",
                {{"sign", cf.sign},
                 {"lambdas", cf.lambdas},
                 {"fixed_block", cf.fixed_block},
                 {"matrix", matrix_to_json(cf.canonical())}}},
               {"residuals", {{"admissibility", p.residual}, {"canonical", cres}}}};
  r.check("admissibility", p.residual, c.tol.check);
  r.check("canonical", cres, c.tol.check);
}

void classify_au(const Config& c, const std::string& input, Report& r) {
  const Mat f = read_matrix_file(input);
  add_input(r, "F", f);
  const FMatrix fm(f, c.tol);
  const AuParams p = validate_au(fm, c.tol);
  const FMatrix fn = normalize_au(fm, c.tol);
  const AuParams pn = validate_au(fn, c.tol);
  const double balance = std::abs(pn.trace - pn.inv_trace) / std::max(1.0, pn.trace);
  r.results = {{"trace", p.trace},
               {"inv_trace", p.inv_trace},
               {"qdim", p.qdim},
               {"c", pn.c},
               {"normalized", std::abs(p.trace - p.inv_trace) <= c.tol.check * std::max(1.0, p.trace)},
               {"canonical", canonical_form_au(fn, c.tol)},
               {"residuals", {{"balance", balance}}}};
  r.check("balance after normalization", balance, c.tol.check);
}

void mon_equiv(const Config& c, const std::string& variant, const std::string& f1p, const std::string& f2p,
               Report& r) {
  const Variant v = parse_variant(variant);
  const Mat f1 = read_matrix_file(f1p), f2 = read_matrix_file(f2p);
  add_input(r, "F1", f1);
  add_input(r, "F2", f2);
  const FMatrix a(f1, c.tol), b(f2, c.tol);
  if (v == Variant::ao) {
    const AoEquivalence e = equivalent_ao(a, b, c.tol);
    r.results = {{"variant", "ao"},
                 {"equivalent", e.equivalent},
                 {"monoidally_equivalent", monoidally_equivalent_ao(a, b, c.tol)},
                 {"beta", {validate_ao(a, c.tol).beta, validate_ao(b, c.tol).beta}}};
    if (e.scale_modulus) r.results["scale_modulus"] = *e.scale_modulus;
  } else {
    const FMatrix an = normalize_au(a, c.tol), bn = normalize_au(b, c.tol);
    r.results = {{"variant", "au"},
                 {"equivalent", equivalent_au(an, bn, c.tol)},
                 {"monoidally_equivalent", monoidally_equivalent_au(an, bn, c.tol)},
                 {"qdim", {validate_au(an, c.tol).qdim, validate_au(bn, c.tol).qdim}}};
  }
}

void companion(const Config& c, int sign, double trace, int n, Report& r) {
  r.inputs = {{"sign", sign}, {"trace", trace}, {"n", n}};
  const FMatrix f = construct_ao_companion(sign, trace, n, c.tol);
  const Mat& m = f.matrix();
  const double res = (m * m.conjugate() - static_cast<double>(sign) * Mat::Identity(n, n)).norm();
  const double tr = (m.adjoint() * m).trace().real();
  r.results = {{"matrix", matrix_to_json(m)}, {"sign", sign}, {"trace", tr}, {"residual", res}};
  r.check("F Fbar - sign", res, c.tol.check);
  r.check("trace", std::abs(tr - trace), c.tol.check * std::max(1.0, trace));
}

json category_payload(const Realization& R, int level, bool sixj) {
  json out;
  out["variant"] = to_string(R.variant());
  out["level"] = level;
  json labels = json::object();
  for (const Word& x : R.labels(level))
    labels[word_key(x, R.variant())] = {{"dim", R.rank(x)}, {"qdim", R.irrep_qdim(x)}};
  out["labels"] = labels;
  json fusion = json::object();
  double orth = 0.0, comp = 0.0;
  for (const Word& x : R.labels(level))
    for (const Word& y : R.labels(level)) {
      if (x.size() + y.size() > static_cast<size_t>(level)) continue;
      const FusionIsometries& fi = R.fusion(x, y);
      json zs = json::array();
      for (const FusionChannel& ch : fi.channels) zs.push_back(word_key(ch.z, R.variant()));
      fusion[word_key(x, R.variant()) + "|" + word_key(y, R.variant())] = zs;
      orth = std::max(orth, fi.orthogonality_residual);
      comp = std::max(comp, fi.completeness_residual);
    }
  out["fusion"] = fusion;
  out["residuals"] = {{"fusion_orthogonality", orth}, {"fusion_completeness", comp}};
  if (sixj) {
    json list = json::array();
    double unit = 0.0;
    const auto ls = R.labels(level);
    for (const Word& x : ls)
      for (const Word& y : ls)
        for (const Word& z : ls) {
          if (x.size() + y.size() + z.size() > static_cast<size_t>(level)) continue;
          for (const Word& a : R.labels(static_cast<int>(x.size() + y.size() + z.size()))) {
            Mat m;
            try {
              m = R.sixj(a, x, y, z);
            } catch (const Error& e) {
              if (e.kind() == ErrorKind::ZeroSpace) continue;
              throw;
            }
            unit = std::max(unit, (m.adjoint() * m - Mat::Identity(m.cols(), m.cols())).norm());
            json e = {{"a", word_key(a, R.variant())},
                      {"x", word_key(x, R.variant())},
                      {"y", word_key(y, R.variant())},
                      {"z", word_key(z, R.variant())},
                      {"rows", m.rows()},
                      {"cols", m.cols()}};
            json entries = json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
              json row = json::array();
              for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
              entries.push_back(row);
            }
            e["entries"] = entries;
            list.push_back(e);
          }
        }
    out["sixj"] = list;
    out["residuals"]["sixj_unitarity"] = unit;
  }
  return out;
}

void category(const Config& c, const std::string& input, const std::string& variant, int level, bool sixj,
              Report& r) {
  const Variant v = parse_variant(variant);
  const Mat f = read_matrix_file(input);
  add_input(r, "F", f);
  const Realization R = realize(f, v, c.tol);
  if (level < 0) level = R.level_cap();
  if (level > R.level_cap())
    throw Error(ErrorKind::LevelCapExceeded, "level above the cap " + std::to_string(R.level_cap()));
  const JsonCache cache(cache_dir_from_env(c.cache_dir));
  const std::string key =
      JsonCache::key(std::string("category-") + variant + (sixj ? "-sixj" : ""), R.F(), level);
  if (auto hit = cache.get(key)) {
    r.results = *hit;
    r.extra["cache"] = "hit";
  } else {
    r.results = category_payload(R, level, sixj);
    round_json(r.results);
    cache.put(key, r.results);
    r.extra["cache"] = cache.enabled() ? "miss" : "disabled";
  }
  const json& res = r.results["residuals"];
  r.check("fusion orthogonality", res["fusion_orthogonality"].get<double>(), c.tol.check);
  r.check("fusion completeness", res["fusion_completeness"].get<double>(), c.tol.check);
  if (sixj) r.check("6j unitarity", res["sixj_unitarity"].get<double>(), c.tol.check);
}

void linking(const Config& c, const std::string& f1p, const std::string& f2p, const std::string& variant,
             int level, const std::string& action, Report& r) {
  const Variant v = parse_variant(variant);
  const Mat f1 = read_matrix_file(f1p), f2 = read_matrix_file(f2p);
  add_input(r, "F1", f1);
  add_input(r, "F2", f2);
  const Realization r1 = realize(f1, v, c.tol), r2 = realize(f2, v, c.tol);
  if (level < 0) level = r1.n() <= 3 ? 3 : 2;
  const LinkingAlgebra l = LinkingAlgebra::build(r1, r2, level, c.jobs);
  const bool all = action == "all";

  json sizes = json::object();
  for (const LabelBlock& b : l.blocks()) sizes[word_key(b.label, v)] = b.ref.rows * b.ref.cols;
  r.results["basis_sizes"] = sizes;
  r.results["dim"] = l.dim();
  json residuals = json::object();

  if (all || action == "gram" || action == "relations") {
    const RelationReport rep = check_relations(l);
    if (all || action == "gram") {
      r.results["min_gram_eig"] = rep.min_gram_eig;
      residuals["gram"] = rep.gram_agreement;
      r.check("gram closed vs structure", rep.gram_agreement, c.tol.check);
      r.flag("gram positive definite", rep.min_gram_eig > 0.0);
    }
    if (all || action == "relations") {
      residuals["assoc"] = rep.assoc;
      residuals["antimult"] = rep.antimult;
      residuals["unitarity"] = std::max(rep.unitarity, rep.block_unitarity);
      residuals["conjugation"] = rep.conjugation;
      r.check("associativity", rep.assoc, c.tol.check);
      r.check("anti-multiplicativity", rep.antimult, c.tol.check);
      r.check("unitarity", std::max(rep.unitarity, rep.block_unitarity), c.tol.check);
      r.check("conjugation", rep.conjugation, c.tol.check);
    }
  }
  if (all || action == "kms") {
    const double k = kms_check(l);
    residuals["kms"] = k;
    r.check("kms", k, c.tol.kms);
  }
  if (all || action == "multiplicities") {
    json m = json::object();
    for (const LabelBlock& b : l.blocks()) {
      if (2 * b.level > l.level()) continue;
      const SpectralQuantities s = spectral_quantities(l, b.label);
      m[word_key(b.label, v)] = {{"mult", s.mult}, {"mult_q", s.mult_q}, {"dim_q", s.dim_q}};
      const double slack = c.tol.check * std::max(1.0, s.dim_q);
      r.flag("mult <= mult_q <= dim_q at " + word_key(b.label, v),
             s.mult <= s.mult_q + slack && s.mult_q <= s.dim_q + slack);
      r.check("mult_q - dim_q at " + word_key(b.label, v), std::abs(s.mult_q - s.dim_q), slack);
    }
    r.results["multiplicities"] = m;
  }
  r.results["residuals"] = residuals;
}

void cocycle(const Config& c, const std::string& f1p, const std::string& f2p, int level, bool seeded_u, Report& r) {
  const Mat f1 = read_matrix_file(f1p), f2 = read_matrix_file(f2p);
  add_input(r, "F1", f1);
  add_input(r, "F2", f2);
  const FMatrix a = normalize_ao(FMatrix(f1, c.tol), c.tol), b = normalize_ao(FMatrix(f2, c.tol), c.tol);
  const Realization r1 = Realization::ao(a, c.tol), r2 = Realization::ao(b, c.tol);
  if (level < 0) level = 3;
  LabelUnitaries u;
  if (seeded_u) {
    std::mt19937_64 rng(c.seed);
    u["a"] = random_unitary(r1.rank("a"), rng);
    r.inputs["seed"] = c.seed;
  }
  const CocycleBlocks om = build_cocycle(r1, r2, level, u);
  const double unit = unitarity_residual(om);
  const double ident = check_cocycle_identity(om);
  const bool cob = coboundary_equivalent(a, b, c.tol);
  r.results = {{"level", level},
               {"blocks", om.blocks.size()},
               {"residuals", {{"unitarity", unit}, {"cocycle_identity", ident}}},
               {"coboundary_equivalent", cob}};
  r.check("unitarity", unit, c.tol.check);
  r.check("cocycle identity", ident, c.tol.check);
}

void verify_all(const Config& c, Report& r) {
  AcceptanceOptions o;
  o.seed = c.seed;
  o.jobs = c.jobs;
  json list = json::array();
  json times = json::object();
  for (const CriterionResult& cr : run_acceptance(o)) {
    list.push_back({{"id", cr.id}, {"name", cr.name}, {"pass", cr.pass}, {"detail", cr.detail}});
    times[std::to_string(cr.id)] = cr.seconds;
    r.flag("criterion " + std::to_string(cr.id), cr.pass);
  }
  r.results["criteria"] = list;
  r.extra["criterion_seconds"] = times;
}

// ---- output -------------------------------------------------------------

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && j[0].is_structured()) {
    for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << j.dump() << '\n';
  }
}

void emit(const Config& c, Report& r, double seconds, std::ostream& out) {
  round_json(r.results);
  round_json(r.checks);
  json doc = {{"command", r.command},
              {"inputs_hash", sha256_hex(r.inputs.dump())},
              {"results", r.results},
              {"checks", r.checks},
              {"pass", r.pass()}};
  json extra = r.extra;
  extra["total_seconds"] = round_sig(seconds, 6);
  doc["timings"] = extra;
  if (c.format == "text") {
    out << "command: " << r.command << '\n';
    flatten(doc["results"], "", out);
    for (const json& ch : doc["checks"]) {
      out << (ch["pass"].get<bool>() ? "PASS " : "FAIL ") << ch["name"].get<std::string>();
      if (ch.contains("residual")) out << " residual=" << ch["residual"].dump() << " tol=" << ch["tolerance"].dump();
      out << '\n';
    }
  } else {
    out << doc.dump(2) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Universal orthogonal/unitary quantum groups: classification, categories, linking algebras, cocycles",
               "qmonoidal"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--tol", cfg.tol.check, "identity-residual tolerance")->capture_default_str();
  app.add_option("--tol-rank", cfg.tol.rank, "rank/invertibility tolerance")->capture_default_str();
  app.add_option("--tol-kms", cfg.tol.kms, "KMS residual tolerance")->capture_default_str();
  app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--jobs", cfg.jobs, "OpenMP threads for kernels (0: default, 1: serial)");
  app.add_option("--seed", cfg.seed, "seed for randomized choices");
  app.add_option("--cache-dir", cfg.cache_dir, "JSON cache directory (QMONOIDAL_CACHE overrides)");

  std::string input, f1, f2, variant = "ao", action = "all";
  int level = -1, sign = 0, n = 0;
  double trace = 0.0;
  bool sixj = false;

  auto* c_ao = app.add_subcommand("classify-ao", "classify an A_o defining matrix");
  c_ao->add_option("--input", input, "matrix JSON file")->required();
  auto* c_au = app.add_subcommand("classify-au", "classify an A_u defining matrix");
  c_au->add_option("--input", input, "matrix JSON file")->required();
  auto* me = app.add_subcommand("mon-equiv", "equivalence and monoidal equivalence of two matrices");
  me->add_option("--variant", variant)->check(CLI::IsMember({"ao", "au"}));
  me->add_option("--f1", f1)->required();
  me->add_option("--f2", f2)->required();
  auto* cc = app.add_subcommand("construct-companion", "A_o matrix with given sign, trace and size");
  cc->add_option("--sign", sign)->required()->check(CLI::IsMember({-1, 1}));
  cc->add_option("--trace", trace)->required();
  cc->add_option("--n", n)->required();
  auto* cat = app.add_subcommand("category", "dimensions, fusion table and 6j symbols");
  cat->add_option("--input", input)->required();
  cat->add_option("--variant", variant)->check(CLI::IsMember({"ao", "au"}));
  cat->add_option("--level", level, "level (A_o) or word length (A_u); default the cap");
  cat->add_flag("--sixj", sixj, "include 6j matrices");
  auto* lk = app.add_subcommand("linking", "truncated linking algebra between two matrices");
  lk->add_option("action", action, "gram, relations, multiplicities, kms or all")
      ->check(CLI::IsMember({"gram", "relations", "multiplicities", "kms", "all"}));
  lk->add_option("--f1", f1)->required();
  lk->add_option("--f2", f2)->required();
  lk->add_option("--variant", variant)->check(CLI::IsMember({"ao", "au"}));
  lk->add_option("--level", level);
  auto* co = app.add_subcommand("cocycle", "dual 2-cocycle blocks between two A_o matrices");
  co->add_option("--f1", f1)->required();
  co->add_option("--f2", f2)->required();
  co->add_option("--level", level);
  co->add_option("--seed", cfg.seed, "seed for a random unitary u_a in the cocycle family");
  auto* va = app.add_subcommand("verify-all", "run the acceptance suite");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  if (!cfg.tol.valid()) {
    err << "tolerances must satisfy 0 < tol-rank < tol <= tol-kms\n";
    return kExitUsage;
  }

  Report r;
  {
    std::ostringstream cmd;
    for (size_t i = 0; i < args.size(); ++i) cmd << (i ? " " : "") << args[i];
    r.command = cmd.str();
  }
  r.inputs["tolerances"] = {cfg.tol.rank, cfg.tol.check, cfg.tol.kms};
  const bool seed_given = co->count("--seed") > 0 || app.count("--seed") > 0;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*c_ao) classify_ao(cfg, input, r);
    else if (*c_au) classify_au(cfg, input, r);
    else if (*me) mon_equiv(cfg, variant, f1, f2, r);
    else if (*cc) companion(cfg, sign, trace, n, r);
    else if (*cat) category(cfg, input, variant, level, sixj, r);
    else if (*lk) linking(cfg, f1, f2, variant, level, action, r);
    else if (*co) cocycle(cfg, f1, f2, level, seed_given, r);
    else if (*va) verify_all(cfg, r);
  } catch (const Error& e) {
    err << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return exit_for(e.kind());
  } catch (const json::exception& e) {
    err << json{{"error", "InvalidInput"}, {"message", e.what()}}.dump() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return kExitCheckFailed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(cfg, r, secs, out);
  if (!r.pass()) {
    for (const json& ch : r.checks)
      if (!ch["pass"].get<bool>()) err << "check failed: " << ch.dump() << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace qmon
