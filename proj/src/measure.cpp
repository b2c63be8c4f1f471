#include "folner/measure.hpp"

#include <algorithm>
#include <sstream>

#include "folner/errors.hpp"

namespace folner {

std::string to_string(Truncation t)
{
  return t == Truncation::Exact ? "exact" : "lower-bound";
}

FinSupMeasure::FinSupMeasure(GroupPtr group) : group_(std::move(group))
{
  if (!group_)
    throw InvalidArgument("measure needs a group");
}

FinSupMeasure FinSupMeasure::uniform(const FiniteSubset &a)
{
  if (a.empty())
    throw InvalidArgument("uniform measure on an empty set");
  FinSupMeasure mu(a.group_ptr());
  mu.den_ = a.cardinality();
  mu.num_.reserve(a.size());
  for (const auto &g : a.elements())
    mu.num_.emplace(g, 1);
  return mu;
}

FinSupMeasure FinSupMeasure::delta(GroupPtr group, const GroupElement &g)
{
  FinSupMeasure mu(std::move(group));
  if (!mu.group().owns(g))
    throw TypeMismatch(g.to_string() + " is not an element of " + mu.group().signature());
  mu.num_.emplace(g, 1);
  return mu;
}

FinSupMeasure FinSupMeasure::from_masses(GroupPtr group,
                                         const std::vector<std::pair<GroupElement, Rational>> &atoms,
                                         Truncation flag)
{
  FinSupMeasure mu(std::move(group));
  mu.flag_ = flag;
  Integer den = 1;
  for (const auto &[g, q] : atoms) {
    if (q < 0)
      throw InvalidArgument("negative mass at " + g.to_string());
    if (!mu.group().owns(g))
      throw TypeMismatch(g.to_string() + " is not an element of " + mu.group().signature());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  }
  mu.den_ = den;
  for (const auto &[g, q] : atoms) {
    if (q == 0)
      continue;
    Integer n = q.get_num() * (den / q.get_den());
    mu.num_[g] += n;
  }
  mu.normalize();
  if (mu.total_mass() > 1 && flag == Truncation::Exact)
    throw InvalidArgument("total mass exceeds 1");
  return mu;
}

void FinSupMeasure::normalize()
{
  for (auto it = num_.begin(); it != num_.end();) {
    if (it->second == 0)
      num_.erase(it++);
    else
      ++it;
  }
  Integer g = den_;
  for (const auto &[_, n] : num_) {
    if (g == 1)
      break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (num_.empty())
    g = den_;
  if (g != 1) {
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    for (auto &[_, n] : num_)
      mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
  }
}

Rational FinSupMeasure::mass(const GroupElement &g) const
{
  auto it = num_.find(g);
  if (it == num_.end())
    return 0;
  Rational q(it->second, den_);
  q.canonicalize();
  return q;
}

Rational FinSupMeasure::total_mass() const
{
  Integer s = 0;
  for (const auto &[_, n] : num_)
    s += n;
  Rational q(s, den_);
  q.canonicalize();
  return q;
}

FiniteSubset FinSupMeasure::support() const
{
  std::vector<GroupElement> elems;
  elems.reserve(num_.size());
  for (const auto &[g, _] : num_)
    elems.push_back(g);
  return FiniteSubset(group_, std::move(elems));
}

std::vector<std::pair<GroupElement, Rational>> FinSupMeasure::atoms() const
{
  std::vector<std::pair<GroupElement, Rational>> out;
  for (const auto &g : support().sorted_by_encoding())
    out.emplace_back(g, mass(g));
  return out;
}

FinSupMeasure FinSupMeasure::scaled(const Rational &c) const
{
  if (c < 0)
    throw InvalidArgument("negative scaling of a measure");
  FinSupMeasure r(group_);
  r.flag_ = flag_;
  r.den_ = den_ * c.get_den();
  for (const auto &[g, n] : num_)
    r.num_.emplace(g, n * c.get_num());
  r.normalize();
  return r;
}

FinSupMeasure operator+(const FinSupMeasure &a, const FinSupMeasure &b)
{
  if (a.group().signature() != b.group().signature())
    throw TypeMismatch("measures on different groups");
  FinSupMeasure r(a.group_ptr());
  r.flag_ = a.tainted() || b.tainted() ? Truncation::LowerBound : Truncation::Exact;
  mpz_lcm(r.den_.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
  Integer fa = r.den_ / a.den_, fb = r.den_ / b.den_;
  for (const auto &[g, n] : a.num_)
    r.num_[g] += n * fa;
  for (const auto &[g, n] : b.num_)
    r.num_[g] += n * fb;
  r.normalize();
  return r;
}

bool operator==(const FinSupMeasure &a, const FinSupMeasure &b)
{
  return a.group().signature() == b.group().signature() && a.flag_ == b.flag_ &&
         a.den_ == b.den_ && a.num_ == b.num_;
}

FinSupMeasure convolve(const FinSupMeasure &mu, const FinSupMeasure &nu,
                       std::optional<std::size_t> cap)
{
  if (mu.group().signature() != nu.group().signature())
    throw TypeMismatch("measures on different groups");

  std::vector<std::pair<const GroupElement *, const Integer *>> left;
  left.reserve(mu.num_.size());
  for (const auto &[g, n] : mu.num_)
    left.emplace_back(&g, &n);

  bool dropped = false;
  if (cap && !nu.num_.empty()) {
    std::size_t keep = *cap / nu.num_.size();
    if (keep < left.size()) {
      std::vector<std::pair<std::string, std::size_t>> enc(left.size());
      for (std::size_t i = 0; i < left.size(); ++i)
        enc[i] = {left[i].first->encode(), i};
      std::sort(enc.begin(), enc.end(), [&](const auto &x, const auto &y) {
        int c = cmp(*left[x.second].second, *left[y.second].second);
        if (c != 0)
          return c > 0;
        return x.first < y.first;
      });
      std::vector<std::pair<const GroupElement *, const Integer *>> kept;
      for (std::size_t i = 0; i < keep; ++i)
        kept.push_back(left[enc[i].second]);
      left = std::move(kept);
      dropped = true;
    }
  }

  FinSupMeasure r(mu.group_ptr());
  r.flag_ = dropped || mu.tainted() || nu.tainted() ? Truncation::LowerBound : Truncation::Exact;
  r.den_ = mu.den_ * nu.den_;
  for (const auto &[h, a] : left) {
    for (const auto &[k, b] : nu.num_) {
      Integer &slot = r.num_[mul(*h, k)];
      mpz_addmul(slot.get_mpz_t(), a->get_mpz_t(), b.get_mpz_t());
    }
  }
  r.normalize();
  return r;
}

std::vector<FinSupMeasure> convolution_powers(const FinSupMeasure &omega, std::uint64_t j_max,
                                              std::optional<std::size_t> cap)
{
  std::vector<FinSupMeasure> out;
  out.push_back(FinSupMeasure::delta(omega.group_ptr(), omega.group().identity()));
  for (std::uint64_t j = 1; j <= j_max; ++j)
    out.push_back(j == 1 ? omega : convolve(out.back(), omega, cap));
  return out;
}

WalkDensities::WalkDensities(FinSupMeasure omega, std::optional<std::size_t> cap) : cap_(cap)
{
  powers_.push_back(FinSupMeasure::delta(omega.group_ptr(), omega.group().identity()));
  powers_.push_back(std::move(omega));
  for (const auto &[g, n] : powers_[1].numerators())
    step_atoms_.emplace_back(inv(g), n);
}

const FinSupMeasure &WalkDensities::power(std::uint64_t j)
{
  while (powers_.size() <= j)
    powers_.push_back(convolve(powers_.back(), powers_[1], cap_));
  return powers_[j];
}

Rational WalkDensities::density(std::uint64_t j, const GroupElement &g)
{
  if (j < powers_.size())
    return powers_[j].mass(g);
  // omega^(j)(g) = sum_b omega^(j-1)(g b^{-1}) omega(b)
  const FinSupMeasure &prev = power(j - 1);
  Integer acc = 0;
  for (const auto &[b_inv, w] : step_atoms_) {
    auto it = prev.numerators().find(mul(g, b_inv));
    if (it != prev.numerators().end())
      mpz_addmul(acc.get_mpz_t(), it->second.get_mpz_t(), w.get_mpz_t());
  }
  Rational q(acc, prev.denominator() * powers_[1].denominator());
  q.canonicalize();
  return q;
}

bool WalkDensities::tainted() const
{
  return std::any_of(powers_.begin(), powers_.end(),
                     [](const FinSupMeasure &m) { return m.tainted(); });
}

std::vector<CesaroValue> cesaro_density(WalkDensities &walk, std::uint64_t n,
                                        const FiniteSubset &eval)
{
  if (n == 0)
    throw InvalidArgument("Cesaro mean needs N >= 1");
  if (eval.empty())
    throw InvalidArgument("Cesaro density over an empty evaluation set");
  if (n >= 2)
    walk.power(n - 2);
  std::vector<CesaroValue> out;
  out.reserve(eval.size());
  for (const auto &g : eval.elements()) {
    Rational s = 0;
    for (std::uint64_t j = 0; j < n; ++j)
      s += walk.density(j, g);
    out.push_back({g, s / Rational(to_integer(n))});
  }
  return out;
}

std::vector<CesaroValue> cesaro_density(const FinSupMeasure &omega, std::uint64_t n,
                                        const FiniteSubset &eval, std::optional<std::size_t> cap)
{
  WalkDensities walk(omega, cap);
  return cesaro_density(walk, n, eval);
}

std::string to_csv(const FinSupMeasure &mu)
{
  std::string out = "# total_mass=" + to_string(mu.total_mass()) +
                    " truncation=" + to_string(mu.truncation()) +
                    " group=" + mu.group().signature() + "\n";
  for (const auto &[g, q] : mu.atoms())
    out += g.hex() + "," + q.get_num().get_str() + "," + q.get_den().get_str() + "\n";
  return out;
}

FinSupMeasure from_csv(std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw ParseError("measure CSV lacks its header line");
  std::istringstream header(line.substr(2));
  std::string field, sig, trunc, total;
  while (header >> field) {
    auto eq = field.find('=');
    if (eq == std::string::npos)
      throw ParseError("bad header field '" + field + "'");
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "group")
      sig = value;
    else if (key == "truncation")
      trunc = value;
    else if (key == "total_mass")
      total = value;
  }
  if (sig.empty() || (trunc != "exact" && trunc != "lower-bound") || total.empty())
    throw ParseError("measure CSV header is missing group, truncation or total_mass");
  std::vector<std::pair<GroupElement, Rational>> atoms;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ParseError("measure CSV row needs hex,num,den: '" + line + "'");
    atoms.emplace_back(GroupElement::from_hex(line.substr(0, c1)),
                       parse_rational(line.substr(c1 + 1, c2 - c1 - 1) + "/" +
                                      line.substr(c2 + 1)));
  }
  FinSupMeasure mu = FinSupMeasure::from_masses(
      GroupDescriptor::from_signature(sig), atoms,
      trunc == "exact" ? Truncation::Exact : Truncation::LowerBound);
  if (mu.total_mass() != parse_rational(total))
    throw ParseError("measure CSV total_mass disagrees with its rows");
  return mu;
}

} // namespace folner
