#include "folner/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "folner/action.hpp"
#include "folner/dominance.hpp"
#include "folner/errors.hpp"
#include "folner/families.hpp"

namespace folner {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

ordered_json rat(const Rational &q)
{
  auto [n, d] = to_pair(q);
  return ordered_json{{"num", n}, {"den", d}};
}

void write_atomic(const fs::path &path, const std::string &content)
{
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush())
      throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string dump(const ordered_json &j) { return j.dump(2) + "\n"; }

ordered_json schedule_json(const Schedule &s)
{
  return ordered_json{{"t_base", rat(s.t_base)},
                      {"n_base", std::to_string(s.n_base)},
                      {"eps_base", rat(s.eps_base)},
                      {"depth", s.depth}};
}

// Chain construction ---------------------------------------------------------

struct ChainBuild {
  Chain chain;
  std::vector<ExtractionStep> steps;
  bool budget = false;
  bool extracted = false;
  std::optional<int> failed_level;
  std::optional<Rational> best_ratio;
  std::string message;
};

Rational outside_ratio(const FiniteSubset &e, const FiniteSubset &f)
{
  return ratio(to_integer(set_difference(e, f).size()), f.cardinality());
}

ChainBuild build_chain(const RunConfig &cfg)
{
  ChainBuild b;
  const Limits lim = cfg.limits();
  const int depth = cfg.sched.depth;

  if (cfg.extraction.extract) {
    b.extracted = true;
    ExtractionOptions eo;
    eo.first_index = cfg.extraction.first_index;
    eo.max_index = cfg.extraction.max_index;
    eo.accept_best = cfg.extraction.accept_best;
    eo.limits = lim;
    ExtractionResult r = extract_subsequence(
        [&](std::uint64_t n) { return family_member(cfg, n); }, cfg.sched, depth, eo);
    b.chain = std::move(r.chain);
    b.steps = std::move(r.steps);
    b.budget = r.status == ExtractionStatus::Budget;
    b.failed_level = r.failed_level;
    b.best_ratio = r.best_ratio;
    if (b.budget)
      b.message = "no index up to " + std::to_string(eo.max_index) +
                  " met the tolerance at level " + std::to_string(*r.failed_level);
    return b;
  }

  std::vector<std::uint64_t> idx = cfg.family.indices;
  if (idx.empty())
    for (int k = 1; k <= depth; ++k)
      idx.push_back(static_cast<std::uint64_t>(k));
  if (idx.size() < static_cast<std::size_t>(depth))
    throw InvalidArgument("family.indices lists fewer entries than the depth");
  idx.resize(static_cast<std::size_t>(depth));

  std::vector<FiniteSubset> f;
  for (int k = 1; k <= depth; ++k) {
    try {
      f.push_back(family_member(cfg, idx[k - 1]));
    } catch (const ResourceLimit &e) {
      b.budget = true;
      b.failed_level = k;
      b.message = e.what();
      break;
    }
  }
  for (int d = static_cast<int>(f.size()); d >= 1; --d) {
    try {
      std::vector<FiniteSubset> prefix(f.begin(), f.begin() + d);
      b.chain = build_E_sequence(prefix, cfg.sched, d, lim);
      break;
    } catch (const ResourceLimit &e) {
      b.budget = true;
      b.failed_level = b.failed_level ? std::min(*b.failed_level, d) : d;
      b.message = e.what();
    }
  }
  for (int k = 1; k <= b.chain.depth(); ++k) {
    Rational r = outside_ratio(b.chain.E[k - 1], b.chain.F[k - 1]);
    Rational eps = cfg.sched.eps(k);
    b.steps.push_back({k, idx[k - 1], r, eps, k == 1 || r < eps});
  }
  if (b.chain.depth() > 0)
    b.chain.indices.assign(idx.begin(), idx.begin() + b.chain.depth());
  return b;
}

ordered_json growth_schedule_json(const RunConfig &cfg, int upto)
{
  ordered_json out = ordered_json::array();
  if (cfg.group->kind() == GroupKind::Lamplighter) {
    for (int n = 1; n <= upto; ++n)
      out.push_back(ordered_json{
          {"n", n},
          {"tempered_l", lamplighter_schedule(LamplighterScheduleKind::Tempered, n).to_string()},
          {"dominance_l", lamplighter_schedule(LamplighterScheduleKind::Dominance, n).to_string()}});
  } else {
    for (int n = 1; n <= upto; ++n) {
      PolyGrowthLevel lv = poly_growth_schedule(n);
      out.push_back(ordered_json{{"n", n},
                                 {"l", lv.l.to_string()},
                                 {"m", lv.m ? ordered_json(lv.m->to_string()) : ordered_json()}});
    }
  }
  return out;
}

ordered_json write_chain_artifacts(const fs::path &out, const RunConfig &cfg, const ChainBuild &b,
                                   const std::optional<FinSupMeasure> &omega)
{
  ordered_json m;
  m["schema"] = 1;
  m["group"] = cfg.group->signature();
  m["status"] = b.budget ? "budget" : (b.extracted ? "certified" : "direct");
  m["schedule"] = schedule_json(cfg.sched);
  m["built_depth"] = b.chain.depth();
  m["failed_level"] = b.failed_level ? ordered_json(*b.failed_level) : ordered_json();
  m["best_ratio"] = b.best_ratio ? rat(*b.best_ratio) : ordered_json();
  if (!b.message.empty())
    m["message"] = b.message;
  ordered_json levels = ordered_json::array();
  for (int k = 1; k <= b.chain.depth(); ++k) {
    const ExtractionStep &st = b.steps[k - 1];
    std::string ff = "sets/F_" + std::to_string(k) + ".txt";
    std::string ef = "sets/E_" + std::to_string(k) + ".txt";
    write_atomic(out / ff, to_listing(b.chain.F[k - 1]));
    write_atomic(out / ef, to_listing(b.chain.E[k - 1]));
    levels.push_back(ordered_json{{"level", k},
                                  {"index", st.index},
                                  {"F_size", std::to_string(b.chain.F[k - 1].size())},
                                  {"E_size", std::to_string(b.chain.E[k - 1].size())},
                                  {"N", std::to_string(cfg.sched.N(k))},
                                  {"t", rat(cfg.sched.t(k))},
                                  {"r", rat(cfg.sched.r(k))},
                                  {"eps", rat(st.eps)},
                                  {"ratio", rat(st.ratio)},
                                  {"certified", st.certified},
                                  {"F_file", ff},
                                  {"E_file", ef}});
  }
  m["levels"] = levels;
  if (omega) {
    write_atomic(out / "omega.csv", to_csv(*omega));
    m["omega"] = ordered_json{{"file", "omega.csv"},
                              {"support_size", std::to_string(omega->support_size())},
                              {"total_mass", rat(omega->total_mass())},
                              {"truncation", to_string(omega->truncation())}};
  } else {
    m["omega"] = nullptr;
  }
  m["growth_schedule"] = growth_schedule_json(cfg, std::max(cfg.sched.depth, 1) + 1);
  write_atomic(out / "manifest.json", dump(m));
  return m;
}

// Dominance -----------------------------------------------------------------

struct LevelOutcome {
  DominanceReport rep;
  std::vector<LowerEstimateResult> lower;
  bool lower_pass = true;
};

std::vector<LevelOutcome> dominance_levels(const RunConfig &cfg, const Chain &chain,
                                          WalkDensities &walk)
{
  std::vector<LevelOutcome> out;
  for (int n = 1; n <= chain.depth(); ++n) {
    LevelOutcome lo;
    lo.rep = dominance_report(chain, walk, n, cfg.steps_override);
    for (std::uint64_t j = 0; j < chain.sched.N(n); ++j) {
      lo.lower.push_back(lower_estimate_check(chain, walk, n, j));
      lo.lower_pass = lo.lower_pass && lo.lower.back().pass;
    }
    out.push_back(std::move(lo));
  }
  return out;
}

double scaled_by_size(const DominanceReport &r)
{
  return Rational(r.min_scaled * Rational(r.lam_e) / Rational(r.lam_f)).get_d();
}

std::string c_emp_text(const DominanceReport &r)
{
  return r.c_emp ? to_string(*r.c_emp) : "inf";
}

// Commands ------------------------------------------------------------------

CommandResult cmd_census(const RunConfig &cfg, const fs::path &out)
{
  std::ostringstream csv;
  bool lamp = cfg.group->kind() == GroupKind::Lamplighter;
  bool all_match = true, budget = false;
  std::string note;
  if (lamp)
    csv << "n,tilde_size,tilde_formula,tilde_match,folner_size,folner_formula,folner_match\n";
  else
    csv << "n,ball_size,formula,match\n";
  std::uint64_t done = 0;
  for (std::uint64_t n = 1; n <= cfg.census_max_n; ++n) {
    try {
      if (lamp) {
        std::size_t ts = lamplighter_tilde(n, cfg.limits()).size();
        std::size_t fs_ = lamplighter_folner(n, cfg.limits()).size();
        Integer tf = lamplighter_tilde_size(n), ff = lamplighter_folner_size(n);
        bool tm = to_integer(ts) == tf, fm = to_integer(fs_) == ff;
        all_match = all_match && tm && fm;
        csv << n << ',' << ts << ',' << tf.get_str() << ',' << (tm ? "true" : "false") << ','
            << fs_ << ',' << ff.get_str() << ',' << (fm ? "true" : "false") << '\n';
      } else {
        std::size_t bs = word_ball(cfg.group, n, cfg.limits()).size();
        csv << n << ',' << bs << ',';
        if (cfg.group->kind() == GroupKind::Integers) {
          // Lattice points with l1 norm <= n: sum_k 2^k C(d,k) C(n,k).
          std::size_t d = cfg.group->dimension();
          Integer total = 0;
          for (std::size_t k = 0; k <= d && k <= n; ++k) {
            Integer a, c;
            mpz_bin_uiui(a.get_mpz_t(), d, k);
            mpz_bin_uiui(c.get_mpz_t(), n, k);
            total += (Integer(1) << static_cast<mp_bitcnt_t>(k)) * a * c;
          }
          bool m = total == to_integer(bs);
          all_match = all_match && m;
          csv << total.get_str() << ',' << (m ? "true" : "false") << '\n';
        } else {
          csv << ",\n";
        }
      }
      done = n;
    } catch (const ResourceLimit &e) {
      budget = true;
      note = e.what();
      break;
    }
  }
  write_atomic(out / "census.csv", csv.str());
  CommandResult r;
  r.verdict = !all_match ? Verdict::Fail : (budget ? Verdict::Budget : Verdict::Pass);
  r.summary = "census rows 1.." + std::to_string(done) + (all_match ? ", all match" : ", MISMATCH") +
              (budget ? " (budget: " + note + ")" : "");
  return r;
}

CommandResult cmd_chain(const RunConfig &cfg, const fs::path &out)
{
  ChainBuild b = build_chain(cfg);
  std::optional<FinSupMeasure> omega;
  if (b.chain.depth() > 0)
    omega = build_omega(b.chain.E, cfg.sched);
  write_chain_artifacts(out, cfg, b, omega);
  CommandResult r;
  r.verdict = b.budget ? Verdict::Budget : Verdict::Pass;
  r.summary = "chain depth " + std::to_string(b.chain.depth()) + " of " +
              std::to_string(cfg.sched.depth) + (b.budget ? " (budget: " + b.message + ")" : "");
  return r;
}

CommandResult cmd_dominate(const RunConfig &cfg, const fs::path &out)
{
  ChainBuild b = build_chain(cfg);
  CommandResult r;
  if (b.chain.depth() == 0) {
    write_chain_artifacts(out, cfg, b, std::nullopt);
    r.verdict = Verdict::Budget;
    r.summary = "no level could be built: " + b.message;
    return r;
  }
  FinSupMeasure omega = build_omega(b.chain.E, cfg.sched);
  write_chain_artifacts(out, cfg, b, omega);
  WalkDensities walk(omega, cfg.caps.convolution);
  std::vector<LevelOutcome> levels = dominance_levels(cfg, b.chain, walk);

  ordered_json rep;
  rep["schema"] = 1;
  rep["group"] = cfg.group->signature();
  rep["status"] = b.budget ? "budget" : "complete";
  rep["schedule"] = schedule_json(cfg.sched);
  rep["truncation_depth"] = b.chain.depth();
  rep["omega_total_mass"] = rat(omega.total_mass());
  rep["steps_override"] = cfg.steps_override ? ordered_json(std::to_string(*cfg.steps_override))
                                             : ordered_json();
  ordered_json arr = ordered_json::array();
  std::ostringstream csv;
  csv << "level,index,F_size,E_size,N,min_scaled,bound,c_emp,pass,lower_estimate_pass,tainted,"
         "scaled_by_size_ratio\n";
  bool all_pass = true, tainted = false;
  for (const LevelOutcome &lo : levels) {
    const DominanceReport &d = lo.rep;
    bool level_pass = d.pass && lo.lower_pass;
    all_pass = all_pass && level_pass;
    tainted = tainted || d.tainted;
    ordered_json le = ordered_json::array();
    for (std::size_t j = 0; j < lo.lower.size(); ++j)
      le.push_back(ordered_json{{"j", j},
                                {"bound", rat(lo.lower[j].bound)},
                                {"min", rat(lo.lower[j].min_value)},
                                {"violations", lo.lower[j].violations},
                                {"pass", lo.lower[j].pass}});
    std::uint64_t index = b.chain.indices[d.level - 1];
    arr.push_back(ordered_json{{"level", d.level},
                               {"index", index},
                               {"F_size", d.lam_f.get_str()},
                               {"E_size", d.lam_e.get_str()},
                               {"N", std::to_string(d.n_steps)},
                               {"min_scaled", rat(d.min_scaled)},
                               {"bound", rat(d.bound)},
                               {"c_emp", d.c_emp ? rat(*d.c_emp) : ordered_json("inf")},
                               {"pass", d.pass},
                               {"tainted", d.tainted},
                               {"lower_estimate", le},
                               {"lower_estimate_pass", lo.lower_pass}});
    csv << d.level << ',' << index << ',' << d.lam_f.get_str() << ',' << d.lam_e.get_str() << ','
        << d.n_steps << ',' << to_string(d.min_scaled) << ',' << to_string(d.bound) << ','
        << c_emp_text(d) << ',' << (d.pass ? "true" : "false") << ','
        << (lo.lower_pass ? "true" : "false") << ',' << (d.tainted ? "true" : "false") << ','
        << scaled_by_size(d) << '\n';
  }
  rep["levels"] = arr;
  rep["pass"] = all_pass;
  rep["tainted"] = tainted;

  ordered_json diag;
  diag["c_prime"] = c_prime();
  ordered_json sbs = ordered_json::array();
  for (const LevelOutcome &lo : levels)
    sbs.push_back(scaled_by_size(lo.rep));
  diag["scaled_by_size_ratio"] = sbs;
  ordered_json lim = ordered_json::array();
  for (const LimitRow &row : limit_diagnostics(cfg.sched, 1, std::max(cfg.sched.depth, 1) + 4))
    lim.push_back(ordered_json{{"n", row.n},
                               {"power", row.power},
                               {"exponential", row.exponential},
                               {"gap", row.gap}});
  diag["limit_rows"] = lim;
  rep["diagnostics"] = diag;

  write_atomic(out / "report.json", dump(rep));
  write_atomic(out / "report.csv", csv.str());

  r.verdict = !all_pass ? Verdict::Fail : (b.budget ? Verdict::Budget : Verdict::Pass);
  r.summary = std::to_string(levels.size()) + " level(s), " + (all_pass ? "all pass" : "FAIL") +
              (b.budget ? " (budget: " + b.message + ")" : "");
  return r;
}

Observable random_function(std::mt19937_64 &rng, std::size_t dim)
{
  std::uniform_int_distribution<int> d(0, 8);
  std::vector<Rational> v(dim);
  for (auto &x : v)
    x = make_rational(d(rng), 8);
  return Observable::function(std::move(v));
}

// B B^T / 4 with small integer B: positive semidefinite by construction.
Observable random_psd(std::mt19937_64 &rng, std::size_t dim)
{
  std::uniform_int_distribution<int> d(-2, 2);
  RationalMatrix b(dim), m(dim);
  for (auto &x : b.a)
    x = d(rng);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < dim; ++k)
        s += b(i, k) * b(j, k);
      m(i, j) = s / 4;
    }
  return Observable::matrix(std::move(m));
}

Observable random_hermitian(std::mt19937_64 &rng, std::size_t dim)
{
  std::uniform_int_distribution<int> d(-8, 8);
  RationalMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      m(i, j) = m(j, i) = make_rational(d(rng), 4);
  return Observable::matrix(std::move(m));
}

Observable build_observable(const ObservableSpec &s, const FiniteQuotient &q, bool matrix)
{
  std::size_t dim = q.size();
  switch (s.kind) {
  case ObservableSpec::Kind::Indicator: {
    std::vector<Rational> v(dim, 0);
    for (auto st : s.states) {
      if (st >= dim)
        throw InvalidArgument("indicator state " + std::to_string(st) + " outside the quotient");
      v[st] = 1;
    }
    return Observable::function(std::move(v));
  }
  case ObservableSpec::Kind::Values:
    if (s.values.size() != dim)
      throw InvalidArgument("observable needs " + std::to_string(dim) + " values");
    return Observable::function(s.values);
  case ObservableSpec::Kind::Matrix: {
    if (s.rows.size() != dim)
      throw InvalidArgument("matrix observable needs " + std::to_string(dim) + " rows");
    RationalMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (s.rows[i].size() != dim)
        throw InvalidArgument("matrix observable must be square");
      for (std::size_t j = 0; j < dim; ++j)
        m(i, j) = s.rows[i][j];
    }
    return Observable::matrix(std::move(m));
  }
  case ObservableSpec::Kind::Constant:
    return Observable::constant(matrix ? Observable::Kind::Matrix : Observable::Kind::Function,
                                dim, s.constant);
  }
  throw InvalidArgument("unknown observable kind");
}

struct DiagCsv {
  std::ostringstream os;
  bool all_pass = true;
  DiagCsv() { os << "check,observable,param,n,set_size,value,value_float,bound,pass\n"; }
  void row(const std::string &check, const std::string &obs, const std::string &param,
           const std::string &n, const std::string &size, const std::optional<Rational> &value,
           const std::string &bound, std::optional<bool> pass)
  {
    os << check << ',' << obs << ',' << param << ',' << n << ',' << size << ',';
    if (value)
      os << to_string(*value) << ',' << value->get_d();
    else
      os << ',';
    os << ',' << bound << ',';
    if (pass) {
      os << (*pass ? "true" : "false");
      all_pass = all_pass && *pass;
    }
    os << '\n';
  }
};

CommandResult cmd_simulate(const RunConfig &cfg, const fs::path &out)
{
  ChainBuild b = build_chain(cfg);
  CommandResult r;
  int level = cfg.action.level == 0 ? cfg.sched.depth : cfg.action.level;
  if (b.chain.depth() < level) {
    write_chain_artifacts(out, cfg, b, std::nullopt);
    r.verdict = Verdict::Budget;
    r.summary = "chain stopped before level " + std::to_string(level) + ": " + b.message;
    return r;
  }
  FinSupMeasure omega = build_omega(b.chain.E, cfg.sched);
  WalkDensities walk(omega, cfg.caps.convolution);
  DominanceReport rep = dominance_report(b.chain, walk, level, cfg.steps_override);
  const FiniteSubset &f_level = b.chain.F[level - 1];

  FiniteQuotient q(cfg.group, cfg.action.modulus);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::pair<std::string, Observable>> battery;
  for (std::size_t i = 0; i < cfg.action.observables.size(); ++i)
    battery.emplace_back("cfg" + std::to_string(i),
                         build_observable(cfg.action.observables[i], q, cfg.action.matrix));
  if (cfg.action.matrix && cfg.action.random_observables > 0 && q.size() > 16)
    throw InvalidArgument("random matrix observables need a quotient of at most 16 states");
  for (std::size_t i = 0; i < cfg.action.random_observables; ++i)
    battery.emplace_back("rand" + std::to_string(i), cfg.action.matrix ? random_psd(rng, q.size())
                                                                      : random_function(rng, q.size()));

  // Each averaging set enters only through its image in Q, computed once.
  struct ConvSet {
    std::uint64_t index;
    std::string size;
    std::vector<std::pair<std::uint32_t, Rational>> weights;
  };
  std::vector<ConvSet> conv;
  if (cfg.action.convergence_indices.empty()) {
    for (int k = 0; k < b.chain.depth(); ++k)
      conv.push_back({b.chain.indices[k], std::to_string(b.chain.F[k].size()),
                      pushforward(q, b.chain.F[k])});
  } else {
    for (auto n : cfg.action.convergence_indices) {
      if (cfg.family.type == FamilySpec::Type::Lamplighter) {
        conv.push_back({n, lamplighter_folner_size(n).get_str(),
                        lamplighter_folner_pushforward(q, n)});
      } else {
        FiniteSubset f = family_member(cfg, n);
        conv.push_back({n, std::to_string(f.size()), pushforward(q, f)});
      }
    }
  }

  DiagCsv d;
  std::string c_text = c_emp_text(rep);
  d.row("dominance_report", "-", "level=" + std::to_string(level), std::to_string(rep.n_steps),
        std::to_string(f_level.size()), rep.min_scaled, to_string(rep.bound), rep.pass);
  d.row("generates_quotient", "-", "", "", std::to_string(omega.support_size()), std::nullopt, "",
        generates_quotient(q, omega.support()));

  std::uint64_t n_steps = rep.n_steps;
  std::vector<FiniteSubset> weak_sets(b.chain.F.begin(), b.chain.F.begin() + level);
  for (const auto &[name, x] : battery) {
    Observable p = invariant_projection(q, x);
    for (std::size_t i = 0; i < conv.size(); ++i) {
      bool last = i + 1 == conv.size();
      Rational dist = sup_distance(combine(conv[i].weights, q, x), p);
      d.row("convergence", name, "", std::to_string(conv[i].index), conv[i].size, dist,
            last ? to_string(cfg.action.tolerance) : "",
            last ? std::optional<bool>(dist <= cfg.action.tolerance) : std::nullopt);
    }
    bool proj = markov_apply(q, omega.scaled(1 / omega.total_mass()), p) == p &&
                invariant_projection(q, markov_apply(q, omega.scaled(1 / omega.total_mass()), x)) == p;
    d.row("projection", name, "", "", "", std::nullopt, "", proj);
    if (x.is_positive()) {
      if (rep.c_emp) {
        OrderCheck oc = check_dominance(q, f_level, omega, n_steps, *rep.c_emp, x);
        d.row("dominance", name, "C=" + c_text, std::to_string(n_steps),
              std::to_string(f_level.size()), oc.slack, "0", oc.pass);
      } else {
        d.row("dominance", name, "C=inf", std::to_string(n_steps), std::to_string(f_level.size()),
              std::nullopt, "", false);
      }
      if (!x.is_matrix() && rep.c_emp) {
        for (const Rational &eps : cfg.action.eps) {
          Weak11Probe w = weak11_probe(q, weak_sets, x, eps, *rep.c_emp);
          d.row("weak11", name, "eps=" + to_string(eps), std::to_string(level), "",
                w.complement_mass, to_string(w.bound), w.pass);
        }
      }
    } else {
      d.row("dominance", name, "not positive", "", "", std::nullopt, "", std::nullopt);
    }
  }

  for (std::size_t t = 0; t < cfg.action.kadison_trials; ++t) {
    Observable x = random_hermitian(rng, q.size());
    OrderCheck oc = kadison_check(q, f_level, x);
    d.row("kadison", "herm" + std::to_string(t), "", std::to_string(level),
          std::to_string(f_level.size()), oc.slack, "0", oc.pass);
  }

  write_atomic(out / "diagnostics.csv", d.os.str());
  r.verdict = d.all_pass ? Verdict::Pass : Verdict::Fail;
  r.summary = std::to_string(battery.size()) + " observable(s), " +
              std::to_string(cfg.action.kadison_trials) + " Kadison trial(s), C_emp=" + c_text +
              (d.all_pass ? ", all pass" : ", FAIL");
  return r;
}

CommandResult cmd_sweep(const RunConfig &cfg, const fs::path &out)
{
  std::vector<Rational> tb = cfg.sweep.t_bases;
  std::vector<std::uint64_t> nb = cfg.sweep.n_bases;
  if (tb.empty())
    tb.push_back(cfg.sched.t_base);
  if (nb.empty())
    nb.push_back(cfg.sched.n_base);
  std::ostringstream csv;
  csv << "t_base,n_base,level,index,F_size,E_size,N,min_scaled,bound,c_emp,pass,status,"
         "scaled_by_size_ratio\n";
  bool any_fail = false, any_budget = false;
  std::size_t combos = 0;
  for (const Rational &t : tb)
    for (std::uint64_t n : nb) {
      RunConfig c = cfg;
      c.sched.t_base = t;
      c.sched.n_base = n;
      c.sched.validate();
      ++combos;
      ChainBuild b = build_chain(c);
      std::string status = b.budget ? "budget" : "complete";
      any_budget = any_budget || b.budget;
      if (b.chain.depth() == 0) {
        csv << to_string(t) << ',' << n << ",,,,,,,,,," << status << ",\n";
        continue;
      }
      FinSupMeasure omega = build_omega(b.chain.E, c.sched);
      WalkDensities walk(omega, c.caps.convolution);
      for (int k = 1; k <= b.chain.depth(); ++k) {
        DominanceReport d = dominance_report(b.chain, walk, k, c.steps_override);
        any_fail = any_fail || !d.pass;
        csv << to_string(t) << ',' << n << ',' << k << ',' << b.chain.indices[k - 1] << ','
            << d.lam_f.get_str() << ',' << d.lam_e.get_str() << ',' << d.n_steps << ','
            << to_string(d.min_scaled) << ',' << to_string(d.bound) << ',' << c_emp_text(d) << ','
            << (d.pass ? "true" : "false") << ',' << status << ',' << scaled_by_size(d) << '\n';
      }
    }
  write_atomic(out / "sweep.csv", csv.str());
  CommandResult r;
  r.verdict = any_fail ? Verdict::Fail : (any_budget ? Verdict::Budget : Verdict::Pass);
  r.summary = std::to_string(combos) + " schedule(s) swept" + (any_fail ? ", FAIL" : "") +
              (any_budget ? ", budget hit" : "");
  return r;
}

} // namespace

void apply_overrides(RunConfig &cfg, const RunOptions &opts)
{
  if (opts.cap) {
    if (*opts.cap == 0)
      throw InvalidArgument("--cap must be positive");
    cfg.caps.set_size = *opts.cap;
  }
  if (opts.depth) {
    if (*opts.depth < 1)
      throw InvalidArgument("--depth must be at least 1");
    cfg.sched.depth = *opts.depth;
    if (cfg.action.level > cfg.sched.depth)
      cfg.action.level = cfg.sched.depth;
  }
  if (opts.seed)
    cfg.seed = *opts.seed;
  cfg.sched.validate();
}

CommandResult run_command(std::string_view command, RunConfig cfg, const RunOptions &opts)
{
  apply_overrides(cfg, opts);
  fs::path out(opts.out_dir.empty() ? "." : opts.out_dir);
  if (command == "census")
    return cmd_census(cfg, out);
  if (command == "chain")
    return cmd_chain(cfg, out);
  if (command == "dominate")
    return cmd_dominate(cfg, out);
  if (command == "simulate")
    return cmd_simulate(cfg, out);
  if (command == "sweep")
    return cmd_sweep(cfg, out);
  throw InvalidArgument("unknown command '" + std::string(command) + "'");
}

CommandResult run_command_json(std::string_view command, std::string_view config_json,
                               const std::string &base_dir, const RunOptions &opts)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return run_command(command, parse_config(j, base_dir), opts);
}

} // namespace folner
