#include "folner/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "folner/errors.hpp"
#include "folner/families.hpp"

namespace folner {

using nlohmann::json;

namespace {

Rational rational_field(const json &v, const char *what)
{
  if (v.is_number_integer())
    return Rational(to_string(Integer(v.get<long>())));
  if (v.is_string())
    return parse_rational(v.get<std::string>());
  if (v.is_object() && v.contains("num") && v.contains("den"))
    return parse_rational(v.at("num").get<std::string>() + "/" + v.at("den").get<std::string>());
  throw ParseError(std::string("expected a rational for ") + what);
}

std::uint64_t u64_field(const json &v, const char *what)
{
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ParseError(std::string("expected a nonnegative integer for ") + what);
  return v.get<std::uint64_t>();
}

template <typename F>
void opt(const json &obj, const char *key, F &&f)
{
  if (obj.is_object() && obj.contains(key) && !obj.at(key).is_null())
    f(obj.at(key));
}

GroupPtr parse_group(const json &g)
{
  if (g.is_string())
    return GroupDescriptor::from_signature(g.get<std::string>());
  if (!g.is_object())
    throw ParseError("group must be a string or an object");
  std::string kind = g.value("kind", "integers");
  std::size_t dim = 1;
  opt(g, "dimension", [&](const json &v) { dim = u64_field(v, "group.dimension"); });
  return GroupDescriptor::standard(parse_group_kind(kind), dim);
}

ObservableSpec parse_observable(const json &o)
{
  ObservableSpec s;
  if (!o.is_object())
    throw ParseError("observable must be an object");
  if (o.contains("indicator")) {
    s.kind = ObservableSpec::Kind::Indicator;
    for (const auto &v : o.at("indicator"))
      s.states.push_back(static_cast<std::uint32_t>(u64_field(v, "indicator state")));
  } else if (o.contains("values")) {
    s.kind = ObservableSpec::Kind::Values;
    for (const auto &v : o.at("values"))
      s.values.push_back(rational_field(v, "observable value"));
  } else if (o.contains("matrix")) {
    s.kind = ObservableSpec::Kind::Matrix;
    for (const auto &row : o.at("matrix")) {
      std::vector<Rational> r;
      for (const auto &v : row)
        r.push_back(rational_field(v, "matrix entry"));
      s.rows.push_back(std::move(r));
    }
  } else if (o.contains("constant")) {
    s.kind = ObservableSpec::Kind::Constant;
    s.constant = rational_field(o.at("constant"), "constant observable");
  } else {
    throw ParseError("observable needs one of indicator, values, matrix, constant");
  }
  return s;
}

} // namespace

RunConfig parse_config(const json &j, const std::string &base_dir)
{
  if (!j.is_object())
    throw ParseError("config must be a JSON object");
  if (!j.contains("schema") || !j.at("schema").is_number_integer() || j.at("schema").get<int>() != 1)
    throw ParseError("config needs \"schema\": 1");

  RunConfig cfg;
  cfg.base_dir = base_dir;
  try {
    cfg.group = j.contains("group") ? parse_group(j.at("group")) : GroupDescriptor::integers(1);

    opt(j, "family", [&](const json &f) {
      std::string type = f.value("type", "balls");
      if (type == "balls") {
        cfg.family.type = FamilySpec::Type::Balls;
        std::string growth = f.value("growth", "poly");
        if (growth == "poly")
          cfg.family.growth = FamilySpec::Growth::Poly;
        else if (growth == "linear")
          cfg.family.growth = FamilySpec::Growth::Linear;
        else
          throw ParseError("family.growth must be poly or linear");
      } else if (type == "lamplighter") {
        cfg.family.type = FamilySpec::Type::Lamplighter;
      } else if (type == "custom") {
        cfg.family.type = FamilySpec::Type::Custom;
        for (const auto &p : f.at("files"))
          cfg.family.files.push_back(p.get<std::string>());
        if (cfg.family.files.empty())
          throw InvalidArgument("custom family needs at least one file");
      } else {
        throw ParseError("family.type must be balls, lamplighter or custom");
      }
      opt(f, "indices", [&](const json &v) {
        for (const auto &i : v)
          cfg.family.indices.push_back(u64_field(i, "family.indices"));
      });
    });
    if (cfg.family.type == FamilySpec::Type::Lamplighter &&
        cfg.group->kind() != GroupKind::Lamplighter)
      throw InvalidArgument("lamplighter family needs the lamplighter group");

    opt(j, "schedule", [&](const json &s) {
      opt(s, "t_base", [&](const json &v) { cfg.sched.t_base = rational_field(v, "t_base"); });
      opt(s, "n_base", [&](const json &v) { cfg.sched.n_base = u64_field(v, "n_base"); });
      opt(s, "eps_base", [&](const json &v) { cfg.sched.eps_base = rational_field(v, "eps_base"); });
      opt(s, "depth", [&](const json &v) { cfg.sched.depth = static_cast<int>(u64_field(v, "depth")); });
      opt(s, "steps_override", [&](const json &v) { cfg.steps_override = u64_field(v, "steps_override"); });
    });

    opt(j, "extraction", [&](const json &e) {
      std::string mode = e.value("mode", "direct");
      if (mode != "direct" && mode != "extract")
        throw ParseError("extraction.mode must be direct or extract");
      cfg.extraction.extract = mode == "extract";
      opt(e, "first_index", [&](const json &v) { cfg.extraction.first_index = u64_field(v, "first_index"); });
      opt(e, "max_index", [&](const json &v) { cfg.extraction.max_index = u64_field(v, "max_index"); });
      opt(e, "accept_best", [&](const json &v) { cfg.extraction.accept_best = v.get<bool>(); });
    });

    opt(j, "caps", [&](const json &c) {
      opt(c, "set_size", [&](const json &v) { cfg.caps.set_size = u64_field(v, "caps.set_size"); });
      opt(c, "convolution", [&](const json &v) { cfg.caps.convolution = u64_field(v, "caps.convolution"); });
    });

    opt(j, "action", [&](const json &a) {
      opt(a, "modulus", [&](const json &v) { cfg.action.modulus = static_cast<std::uint32_t>(u64_field(v, "modulus")); });
      opt(a, "matrix", [&](const json &v) { cfg.action.matrix = v.get<bool>(); });
      opt(a, "observables", [&](const json &v) {
        for (const auto &o : v)
          cfg.action.observables.push_back(parse_observable(o));
      });
      opt(a, "random_observables", [&](const json &v) { cfg.action.random_observables = u64_field(v, "random_observables"); });
      opt(a, "convergence_indices", [&](const json &v) {
        for (const auto &i : v)
          cfg.action.convergence_indices.push_back(u64_field(i, "convergence_indices"));
      });
      opt(a, "tolerance", [&](const json &v) { cfg.action.tolerance = rational_field(v, "tolerance"); });
      opt(a, "eps", [&](const json &v) {
        for (const auto &e : v)
          cfg.action.eps.push_back(rational_field(e, "action.eps"));
      });
      opt(a, "kadison_trials", [&](const json &v) { cfg.action.kadison_trials = u64_field(v, "kadison_trials"); });
      opt(a, "level", [&](const json &v) { cfg.action.level = static_cast<int>(u64_field(v, "action.level")); });
    });

    opt(j, "census", [&](const json &c) {
      opt(c, "max_n", [&](const json &v) { cfg.census_max_n = u64_field(v, "census.max_n"); });
    });

    opt(j, "sweep", [&](const json &s) {
      opt(s, "t_bases", [&](const json &v) {
        for (const auto &x : v)
          cfg.sweep.t_bases.push_back(rational_field(x, "sweep.t_bases"));
      });
      opt(s, "n_bases", [&](const json &v) {
        for (const auto &x : v)
          cfg.sweep.n_bases.push_back(u64_field(x, "sweep.n_bases"));
      });
    });

    opt(j, "seed", [&](const json &v) { cfg.seed = u64_field(v, "seed"); });
  } catch (const json::exception &e) {
    throw ParseError(std::string("config: ") + e.what());
  }

  if (cfg.caps.set_size == 0 || (cfg.caps.convolution && *cfg.caps.convolution == 0))
    throw InvalidArgument("caps must be positive");
  cfg.sched.validate();
  if (cfg.action.modulus < 1)
    throw InvalidArgument("action.modulus must be positive");
  for (const auto &e : cfg.action.eps)
    if (e <= 0)
      throw InvalidArgument("action.eps must be positive");
  if (cfg.action.level < 0 || cfg.action.level > cfg.sched.depth)
    throw InvalidArgument("action.level must lie in [1, depth]");
  return cfg;
}

FiniteSubset family_member(const RunConfig &cfg, std::uint64_t n)
{
  if (n == 0)
    throw InvalidArgument("family indices start at 1");
  const Limits lim = cfg.limits();
  switch (cfg.family.type) {
  case FamilySpec::Type::Lamplighter:
    return lamplighter_folner_direct(n, lim);
  case FamilySpec::Type::Custom: {
    if (n > cfg.family.files.size())
      throw InvalidArgument("custom family has no member " + std::to_string(n));
    std::filesystem::path p(cfg.family.files[n - 1]);
    if (p.is_relative())
      p = std::filesystem::path(cfg.base_dir) / p;
    std::ifstream in(p, std::ios::binary);
    if (!in)
      throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    FiniteSubset s = from_listing(ss.str());
    if (s.group().signature() != cfg.group->signature())
      throw TypeMismatch(p.string() + " belongs to " + s.group().signature());
    if (s.size() > lim.max_set_size)
      throw ResourceLimit("custom set exceeds the set size cap", lim.max_set_size);
    return FiniteSubset(cfg.group, s.elements());
  }
  case FamilySpec::Type::Balls:
    break;
  }
  std::uint64_t radius = n;
  if (cfg.family.growth == FamilySpec::Growth::Poly) {
    if (n > 7)
      throw ResourceLimit("ball radius 2^(n^2) too large for n = " + std::to_string(n),
                          lim.max_set_size);
    radius = std::uint64_t{1} << (n * n);
  }
  return word_ball(cfg.group, radius, lim);
}

} // namespace folner
