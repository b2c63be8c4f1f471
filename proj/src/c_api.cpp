#include "folner/folner.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "folner/commands.hpp"
#include "folner/dominance.hpp"
#include "folner/errors.hpp"
#include "folner/families.hpp"
#include "folner/measure.hpp"

struct fol_group {
  folner::GroupPtr g;
};
struct fol_set {
  folner::FiniteSubset s;
};
struct fol_measure {
  folner::FinSupMeasure m;
};

namespace {

thread_local std::string last_error;

fol_status fail(fol_status st, const std::string &msg)
{
  last_error = msg;
  return st;
}

template <typename F>
fol_status guarded(F &&f)
{
  try {
    last_error.clear();
    f();
    return FOL_OK;
  } catch (const folner::Error &e) {
    return fail(static_cast<fol_status>(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(FOL_ERR_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception &e) {
    return fail(FOL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FOL_ERR_INTERNAL, "unknown error");
  }
}

char *dup(const std::string &s)
{
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p)
    throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void *p, const char *name)
{
  if (!p)
    throw folner::InvalidArgument(std::string(name) + " is NULL");
}

folner::Limits limits(uint64_t cap)
{
  folner::Limits l;
  if (cap)
    l.max_set_size = static_cast<std::size_t>(cap);
  return l;
}

folner::GroupElement element(const fol_group *g, const char *hex)
{
  need(hex, "element");
  folner::GroupElement e = folner::GroupElement::from_hex(hex);
  if (!g->g->owns(e))
    throw folner::TypeMismatch("element does not belong to " + g->g->signature());
  return e;
}

} // namespace

extern "C" {

const char *fol_last_error(void) { return last_error.c_str(); }

const char *fol_version(void) { return "1.0.0"; }

void fol_string_free(char *s) { std::free(s); }

fol_status fol_group_new(const char *signature, fol_group **out)
{
  return guarded([&] {
    need(signature, "signature");
    need(out, "out");
    *out = new fol_group{folner::GroupDescriptor::from_signature(signature)};
  });
}

void fol_group_free(fol_group *g) { delete g; }

fol_status fol_group_signature(const fol_group *g, char **out)
{
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = dup(g->g->signature());
  });
}

fol_status fol_element_mul(const fol_group *g, const char *a_hex, const char *b_hex, char **out_hex)
{
  return guarded([&] {
    need(g, "group");
    need(out_hex, "out");
    *out_hex = dup(folner::mul(element(g, a_hex), element(g, b_hex)).hex());
  });
}

fol_status fol_element_inv(const fol_group *g, const char *a_hex, char **out_hex)
{
  return guarded([&] {
    need(g, "group");
    need(out_hex, "out");
    *out_hex = dup(folner::inv(element(g, a_hex)).hex());
  });
}

fol_status fol_element_to_string(const char *hex, char **out)
{
  return guarded([&] {
    need(hex, "element");
    need(out, "out");
    *out = dup(folner::GroupElement::from_hex(hex).to_string());
  });
}

fol_status fol_set_word_ball(const fol_group *g, uint64_t radius, uint64_t cap, fol_set **out)
{
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = new fol_set{folner::word_ball(g->g, radius, limits(cap))};
  });
}

fol_status fol_set_lamplighter(uint64_t n, int two_sided, uint64_t cap, fol_set **out)
{
  return guarded([&] {
    need(out, "out");
    *out = new fol_set{two_sided ? folner::lamplighter_folner(n, limits(cap))
                                 : folner::lamplighter_tilde(n, limits(cap))};
  });
}

fol_status fol_set_from_listing(const char *text, fol_set **out)
{
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new fol_set{folner::from_listing(text)};
  });
}

fol_status fol_set_to_listing(const fol_set *s, char **out)
{
  return guarded([&] {
    need(s, "set");
    need(out, "out");
    *out = dup(folner::to_listing(s->s));
  });
}

fol_status fol_set_size(const fol_set *s, uint64_t *out)
{
  return guarded([&] {
    need(s, "set");
    need(out, "out");
    *out = s->s.size();
  });
}

fol_status fol_set_contains(const fol_set *s, const char *hex, int *out)
{
  return guarded([&] {
    need(s, "set");
    need(hex, "element");
    need(out, "out");
    *out = s->s.contains(folner::GroupElement::from_hex(hex)) ? 1 : 0;
  });
}

fol_status fol_set_product(const fol_set *a, const fol_set *b, uint64_t cap, fol_set **out)
{
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = new fol_set{folner::product(a->s, b->s, limits(cap))};
  });
}

fol_status fol_set_inverse(const fol_set *a, fol_set **out)
{
  return guarded([&] {
    need(a, "a");
    need(out, "out");
    *out = new fol_set{folner::inverse_set(a->s)};
  });
}

fol_status fol_set_power(const fol_set *a, uint64_t k, uint64_t cap, fol_set **out)
{
  return guarded([&] {
    need(a, "a");
    need(out, "out");
    *out = new fol_set{folner::power(a->s, k, limits(cap))};
  });
}

fol_status fol_set_interior(const fol_set *h1, const fol_set *h2, const fol_set *k, fol_set **out)
{
  return guarded([&] {
    need(k, "k");
    need(out, "out");
    if (h1 && h2)
      *out = new fol_set{folner::interior_bilateral(h1->s, h2->s, k->s)};
    else if (h1)
      *out = new fol_set{folner::interior_left(h1->s, k->s)};
    else if (h2)
      *out = new fol_set{folner::interior_right(h2->s, k->s)};
    else
      throw folner::InvalidArgument("interior needs h1 or h2");
  });
}

fol_status fol_set_folner_ratio(const fol_set *k1, const fol_set *f, const fol_set *k2, uint64_t cap,
                                char **out)
{
  return guarded([&] {
    need(k1, "k1");
    need(f, "f");
    need(k2, "k2");
    need(out, "out");
    *out = dup(folner::to_string(folner::folner_ratio(k1->s, f->s, k2->s, limits(cap))));
  });
}

void fol_set_free(fol_set *s) { delete s; }

fol_status fol_measure_uniform(const fol_set *s, fol_measure **out)
{
  return guarded([&] {
    need(s, "set");
    need(out, "out");
    *out = new fol_measure{folner::FinSupMeasure::uniform(s->s)};
  });
}

fol_status fol_measure_convolve(const fol_measure *a, const fol_measure *b, uint64_t cap,
                                fol_measure **out)
{
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    std::optional<std::size_t> c;
    if (cap)
      c = static_cast<std::size_t>(cap);
    *out = new fol_measure{folner::convolve(a->m, b->m, c)};
  });
}

fol_status fol_measure_mass(const fol_measure *m, const char *hex, char **out)
{
  return guarded([&] {
    need(m, "measure");
    need(hex, "element");
    need(out, "out");
    *out = dup(folner::to_string(m->m.mass(folner::GroupElement::from_hex(hex))));
  });
}

fol_status fol_measure_total_mass(const fol_measure *m, char **out)
{
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    *out = dup(folner::to_string(m->m.total_mass()));
  });
}

fol_status fol_measure_is_truncated(const fol_measure *m, int *out)
{
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    *out = m->m.tainted() ? 1 : 0;
  });
}

fol_status fol_measure_to_csv(const fol_measure *m, char **out)
{
  return guarded([&] {
    need(m, "measure");
    need(out, "out");
    *out = dup(folner::to_csv(m->m));
  });
}

void fol_measure_free(fol_measure *m) { delete m; }

fol_status fol_finite_n_lower_bound(const char *lam_f, const char *lam_e, const char *r_n,
                                    const char *r_np1, uint64_t n_steps, char **out)
{
  return guarded([&] {
    need(lam_f, "lam_f");
    need(lam_e, "lam_e");
    need(r_n, "r_n");
    need(r_np1, "r_np1");
    need(out, "out");
    folner::Rational lf = folner::parse_rational(lam_f), le = folner::parse_rational(lam_e);
    if (lf.get_den() != 1 || le.get_den() != 1)
      throw folner::InvalidArgument("set sizes must be integers");
    *out = dup(folner::to_string(folner::finite_n_lower_bound(
        lf.get_num(), le.get_num(), folner::parse_rational(r_n), folner::parse_rational(r_np1),
        n_steps)));
  });
}

fol_status fol_arithgeo_closed_form(const char *r, uint64_t n_steps, char **out)
{
  return guarded([&] {
    need(r, "r");
    need(out, "out");
    *out = dup(folner::to_string(folner::arithgeo_closed_form(folner::parse_rational(r), n_steps)));
  });
}

fol_status fol_run_command(const char *command, const char *config_json,
                           const fol_run_options *options, int *verdict, char **summary)
{
  return guarded([&] {
    need(command, "command");
    need(config_json, "config");
    need(verdict, "verdict");
    folner::RunOptions ro;
    std::string base = ".";
    if (options) {
      if (options->out_dir)
        ro.out_dir = options->out_dir;
      if (options->config_dir)
        base = options->config_dir;
      if (options->cap >= 0)
        ro.cap = static_cast<std::size_t>(options->cap);
      if (options->depth >= 0)
        ro.depth = static_cast<int>(options->depth);
      if (options->seed >= 0)
        ro.seed = static_cast<std::uint64_t>(options->seed);
    }
    folner::CommandResult r = folner::run_command_json(command, config_json, base, ro);
    *verdict = static_cast<int>(r.verdict);
    if (summary)
      *summary = dup(r.summary);
  });
}

} // extern "C"
