#include "folner/group.hpp"

#include <algorithm>
#include <bit>

#include "checked.hpp"
#include "folner/errors.hpp"

namespace folner {

using detail::add_checked;
using detail::mul_checked;
using detail::neg_checked;
using detail::sub_checked;

namespace {

// Lamp windows wider than this are refused rather than allocated.
constexpr __int128 kMaxLampSpan = __int128{1} << 32;

void xor_into(std::vector<std::uint64_t> &dst, std::uint64_t word0,
              const std::vector<std::uint64_t> &more, std::uint64_t bit_offset)
{
  auto put = [&](std::uint64_t word, std::uint64_t at) {
    std::size_t wi = at / 64;
    unsigned bi = at % 64;
    dst[wi] ^= word << bi;
    if (bi != 0 && wi + 1 < dst.size())
      dst[wi + 1] ^= word >> (64 - bi);
  };
  put(word0, bit_offset);
  for (std::size_t i = 0; i < more.size(); ++i)
    put(more[i], bit_offset + 64 * (i + 1));
}

} // namespace

std::string to_string(GroupKind kind)
{
  switch (kind) {
    case GroupKind::Integers: return "integers";
    case GroupKind::Heisenberg: return "heisenberg";
    case GroupKind::Lamplighter: return "lamplighter";
  }
  return "unknown";
}

GroupKind parse_group_kind(std::string_view name)
{
  if (name == "integers" || name == "zd" || name == "z")
    return GroupKind::Integers;
  if (name == "heisenberg")
    return GroupKind::Heisenberg;
  if (name == "lamplighter")
    return GroupKind::Lamplighter;
  throw InvalidArgument("unknown group kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// LampSet

LampSet LampSet::from_words(std::int64_t base, std::vector<std::uint64_t> words)
{
  std::size_t first = 0;
  while (first < words.size() && words[first] == 0)
    ++first;
  if (first == words.size())
    return {};

  std::uint64_t shift = 64 * first + std::countr_zero(words[first]);
  std::size_t ws = shift / 64;
  unsigned bs = shift % 64;
  std::vector<std::uint64_t> out(words.size() - ws, 0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = words[k + ws] >> bs;
    if (bs != 0 && k + ws + 1 < words.size())
      out[k] |= words[k + ws + 1] << (64 - bs);
  }
  while (!out.empty() && out.back() == 0)
    out.pop_back();

  LampSet s;
  s.base_ = add_checked(base, static_cast<std::int64_t>(shift));
  s.word0_ = out[0];
  s.more_.assign(out.begin() + 1, out.end());
  return s;
}

LampSet LampSet::from_word(std::int64_t base, std::uint64_t word)
{
  return from_words(base, {word});
}

LampSet LampSet::from_list(std::vector<std::int64_t> lamps)
{
  if (lamps.empty())
    return {};
  std::sort(lamps.begin(), lamps.end());
  if (std::adjacent_find(lamps.begin(), lamps.end()) != lamps.end())
    throw InvalidArgument("lamp set contains duplicates");
  __int128 span = __int128{lamps.back()} - lamps.front() + 1;
  if (span > kMaxLampSpan)
    throw ResourceLimit("lamp window too wide", static_cast<std::size_t>(kMaxLampSpan));
  std::vector<std::uint64_t> words(static_cast<std::size_t>((span + 63) / 64), 0);
  for (std::int64_t x : lamps) {
    auto off = static_cast<std::uint64_t>(__int128{x} - lamps.front());
    words[off / 64] |= std::uint64_t{1} << (off % 64);
  }
  return from_words(lamps.front(), std::move(words));
}

LampSet LampSet::interval(std::int64_t lo, std::int64_t hi)
{
  if (lo > hi)
    return {};
  std::vector<std::int64_t> v;
  for (std::int64_t x = lo;; ++x) {
    v.push_back(x);
    if (x == hi)
      break;
  }
  return from_list(std::move(v));
}

std::size_t LampSet::size() const
{
  std::size_t n = std::popcount(word0_);
  for (auto w : more_)
    n += std::popcount(w);
  return n;
}

std::size_t LampSet::bit_span() const
{
  if (empty())
    return 0;
  std::uint64_t last = more_.empty() ? word0_ : more_.back();
  return 64 * more_.size() + (64 - std::countl_zero(last));
}

std::int64_t LampSet::max() const
{
  if (empty())
    throw InvalidArgument("max of an empty lamp set");
  return base_ + static_cast<std::int64_t>(bit_span()) - 1;
}

bool LampSet::contains(std::int64_t lamp) const
{
  if (empty())
    return false;
  __int128 off = __int128{lamp} - base_;
  if (off < 0 || off >= static_cast<__int128>(bit_span()))
    return false;
  auto o = static_cast<std::size_t>(off);
  std::uint64_t w = o < 64 ? word0_ : more_[o / 64 - 1];
  return (w >> (o % 64)) & 1;
}

std::vector<std::int64_t> LampSet::lamps() const
{
  std::vector<std::int64_t> out;
  auto emit = [&](std::uint64_t w, std::int64_t at) {
    while (w) {
      int b = std::countr_zero(w);
      out.push_back(at + b);
      w &= w - 1;
    }
  };
  if (empty())
    return out;
  emit(word0_, base_);
  for (std::size_t i = 0; i < more_.size(); ++i)
    emit(more_[i], base_ + static_cast<std::int64_t>(64 * (i + 1)));
  return out;
}

LampSet LampSet::shifted(std::int64_t by) const
{
  LampSet s = *this;
  if (!s.empty()) {
    s.base_ = add_checked(s.base_, by);
    (void)s.max(); // the top lamp must stay representable
  }
  return s;
}

LampSet LampSet::xor_shifted(const LampSet &a, const LampSet &b, std::int64_t shift)
{
  if (b.empty())
    return a;
  std::int64_t bb = add_checked(b.base_, shift);
  if (a.empty()) {
    LampSet s = b;
    s.base_ = bb;
    (void)s.max();
    return s;
  }

  std::int64_t lo = std::min(a.base_, bb);
  __int128 off_a = __int128{a.base_} - lo;
  __int128 off_b = __int128{bb} - lo;

  if (a.more_.empty() && b.more_.empty() && off_a < 64 && off_b < 64) {
    int width_a = 64 - std::countl_zero(a.word0_);
    int width_b = 64 - std::countl_zero(b.word0_);
    if (off_a + width_a <= 64 && off_b + width_b <= 64) {
      std::uint64_t w = (a.word0_ << static_cast<int>(off_a)) ^
                        (b.word0_ << static_cast<int>(off_b));
      if (w == 0)
        return {};
      int tz = std::countr_zero(w);
      LampSet s;
      s.base_ = lo + tz;
      s.word0_ = w >> tz;
      return s;
    }
  }

  __int128 end_a = off_a + static_cast<__int128>(a.bit_span());
  __int128 end_b = off_b + static_cast<__int128>(b.bit_span());
  __int128 span = std::max(end_a, end_b);
  if (span > kMaxLampSpan)
    throw ResourceLimit("lamp window too wide", static_cast<std::size_t>(kMaxLampSpan));
  std::vector<std::uint64_t> words(static_cast<std::size_t>((span + 63) / 64), 0);
  xor_into(words, a.word0_, a.more_, static_cast<std::uint64_t>(off_a));
  xor_into(words, b.word0_, b.more_, static_cast<std::uint64_t>(off_b));
  LampSet s = from_words(lo, std::move(words));
  if (!s.empty())
    (void)s.max();
  return s;
}

std::strong_ordering operator<=>(const LampSet &a, const LampSet &b)
{
  if (auto c = a.base_ <=> b.base_; c != 0)
    return c;
  if (auto c = a.word0_ <=> b.word0_; c != 0)
    return c;
  return std::lexicographical_compare_three_way(a.more_.begin(), a.more_.end(),
                                                b.more_.begin(), b.more_.end());
}

// ---------------------------------------------------------------------------
// Element laws

std::strong_ordering operator<=>(const IntegersElement &a, const IntegersElement &b)
{
  if (auto c = a.coords.size() <=> b.coords.size(); c != 0)
    return c;
  return std::lexicographical_compare_three_way(a.coords.begin(), a.coords.end(),
                                                b.coords.begin(), b.coords.end());
}

std::strong_ordering operator<=>(const LamplighterElement &a, const LamplighterElement &b)
{
  if (auto c = a.pos <=> b.pos; c != 0)
    return c;
  return a.lamps <=> b.lamps;
}

IntegersElement mul(const IntegersElement &x, const IntegersElement &y)
{
  if (x.coords.size() != y.coords.size())
    throw TypeMismatch("Z^d elements of different dimension");
  IntegersElement r;
  r.coords.resize(x.coords.size());
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    r.coords[i] = add_checked(x.coords[i], y.coords[i]);
  return r;
}

HeisenbergElement mul(const HeisenbergElement &x, const HeisenbergElement &y)
{
  return {add_checked(x.a, y.a), add_checked(x.b, y.b),
          add_checked(add_checked(x.c, y.c), mul_checked(x.a, y.b))};
}

LamplighterElement mul(const LamplighterElement &x, const LamplighterElement &y)
{
  return {add_checked(x.pos, y.pos), LampSet::xor_shifted(x.lamps, y.lamps, x.pos)};
}

IntegersElement inv(const IntegersElement &x)
{
  IntegersElement r;
  r.coords.resize(x.coords.size());
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    r.coords[i] = neg_checked(x.coords[i]);
  return r;
}

HeisenbergElement inv(const HeisenbergElement &x)
{
  return {neg_checked(x.a), neg_checked(x.b), sub_checked(mul_checked(x.a, x.b), x.c)};
}

LamplighterElement inv(const LamplighterElement &x)
{
  std::int64_t t = neg_checked(x.pos);
  return {t, x.lamps.shifted(t)};
}

GroupElement mul(const GroupElement &x, const GroupElement &y)
{
  return std::visit(
      [](const auto &a, const auto &b) -> GroupElement {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<A, B>)
          return GroupElement(mul(a, b));
        else
          throw TypeMismatch("cannot multiply elements of different groups");
      },
      x.payload(), y.payload());
}

GroupElement inv(const GroupElement &x)
{
  return std::visit([](const auto &a) { return GroupElement(inv(a)); }, x.payload());
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement GroupElement::integers(std::initializer_list<std::int64_t> coords)
{
  return integers(std::span<const std::int64_t>(coords.begin(), coords.size()));
}

GroupElement GroupElement::integers(std::span<const std::int64_t> coords)
{
  IntegersElement e;
  e.coords.assign(coords.begin(), coords.end());
  return GroupElement(std::move(e));
}

GroupElement GroupElement::heisenberg(std::int64_t a, std::int64_t b, std::int64_t c)
{
  return GroupElement(HeisenbergElement{a, b, c});
}

GroupElement GroupElement::lamplighter(std::int64_t pos, std::vector<std::int64_t> lamps)
{
  return GroupElement(LamplighterElement{pos, LampSet::from_list(std::move(lamps))});
}

GroupElement GroupElement::identity(GroupKind kind, std::size_t dimension)
{
  switch (kind) {
    case GroupKind::Integers: {
      IntegersElement e;
      e.coords.assign(dimension, 0);
      return GroupElement(std::move(e));
    }
    case GroupKind::Heisenberg: return GroupElement(HeisenbergElement{});
    case GroupKind::Lamplighter: return GroupElement(LamplighterElement{});
  }
  throw InvalidArgument("unknown group kind");
}

GroupKind GroupElement::kind() const
{
  switch (payload_.index()) {
    case 0: return GroupKind::Integers;
    case 1: return GroupKind::Heisenberg;
    default: return GroupKind::Lamplighter;
  }
}

std::size_t GroupElement::dimension() const
{
  if (auto *z = std::get_if<IntegersElement>(&payload_))
    return z->coords.size();
  return 0;
}

bool GroupElement::is_identity() const
{
  return *this == identity(kind(), dimension());
}

namespace {

void put_uvarint(std::string &out, std::uint64_t v)
{
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

void put_svarint(std::string &out, std::int64_t v)
{
  put_uvarint(out, (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63));
}

struct Reader {
  std::string_view bytes;
  std::size_t at = 0;

  std::uint64_t uvarint()
  {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 70; shift += 7) {
      if (at >= bytes.size())
        throw ParseError("truncated varint in element encoding");
      auto byte = static_cast<std::uint8_t>(bytes[at++]);
      if (shift == 63 && (byte & 0x7e) != 0)
        throw ParseError("varint overflows 64 bits");
      v |= std::uint64_t{byte & 0x7fu} << shift;
      if (!(byte & 0x80))
        return v;
    }
    throw ParseError("varint too long");
  }

  std::int64_t svarint()
  {
    std::uint64_t z = uvarint();
    return static_cast<std::int64_t>((z >> 1) ^ (~(z & 1) + 1));
  }
};

} // namespace

std::string GroupElement::encode() const
{
  std::string out;
  out.push_back(static_cast<char>(kind()));
  std::visit(
      [&](const auto &e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, IntegersElement>) {
          put_uvarint(out, e.coords.size());
          for (auto c : e.coords)
            put_svarint(out, c);
        } else if constexpr (std::is_same_v<E, HeisenbergElement>) {
          put_svarint(out, e.a);
          put_svarint(out, e.b);
          put_svarint(out, e.c);
        } else {
          put_svarint(out, e.pos);
          auto lamps = e.lamps.lamps();
          put_uvarint(out, lamps.size());
          for (auto l : lamps)
            put_svarint(out, l);
        }
      },
      payload_);
  return out;
}

GroupElement GroupElement::decode(std::string_view bytes)
{
  if (bytes.empty())
    throw ParseError("empty element encoding");
  Reader r{bytes, 1};
  GroupElement g;
  switch (static_cast<GroupKind>(bytes[0])) {
    case GroupKind::Integers: {
      std::uint64_t d = r.uvarint();
      if (d > bytes.size())
        throw ParseError("Z^d dimension exceeds encoding length");
      IntegersElement e;
      for (std::uint64_t i = 0; i < d; ++i)
        e.coords.push_back(r.svarint());
      g = GroupElement(std::move(e));
      break;
    }
    case GroupKind::Heisenberg: {
      HeisenbergElement e;
      e.a = r.svarint();
      e.b = r.svarint();
      e.c = r.svarint();
      g = GroupElement(e);
      break;
    }
    case GroupKind::Lamplighter: {
      std::int64_t pos = r.svarint();
      std::uint64_t n = r.uvarint();
      if (n > bytes.size())
        throw ParseError("lamp count exceeds encoding length");
      std::vector<std::int64_t> lamps;
      for (std::uint64_t i = 0; i < n; ++i) {
        lamps.push_back(r.svarint());
        if (i > 0 && lamps[i] <= lamps[i - 1])
          throw ParseError("lamps not strictly increasing");
      }
      g = GroupElement::lamplighter(pos, std::move(lamps));
      break;
    }
    default:
      throw ParseError("unknown group kind tag in element encoding");
  }
  if (r.at != bytes.size())
    throw ParseError("trailing bytes in element encoding");
  if (g.encode() != bytes)
    throw ParseError("non-canonical element encoding");
  return g;
}

std::string GroupElement::hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string raw = encode();
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char c : raw) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

GroupElement GroupElement::from_hex(std::string_view hex)
{
  if (hex.size() % 2 != 0)
    throw ParseError("odd-length hex element");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParseError(std::string("bad hex digit '") + c + "'");
  };
  std::string raw;
  for (std::size_t i = 0; i < hex.size(); i += 2)
    raw.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  return decode(raw);
}

std::string GroupElement::to_string() const
{
  return std::visit(
      [](const auto &e) {
        using E = std::decay_t<decltype(e)>;
        std::string s;
        if constexpr (std::is_same_v<E, IntegersElement>) {
          s = "(";
          for (std::size_t i = 0; i < e.coords.size(); ++i)
            s += (i ? "," : "") + std::to_string(e.coords[i]);
          s += ")";
        } else if constexpr (std::is_same_v<E, HeisenbergElement>) {
          s = "H(" + std::to_string(e.a) + "," + std::to_string(e.b) + "," +
              std::to_string(e.c) + ")";
        } else {
          s = "(" + std::to_string(e.pos) + ",{";
          auto lamps = e.lamps.lamps();
          for (std::size_t i = 0; i < lamps.size(); ++i)
            s += (i ? "," : "") + std::to_string(lamps[i]);
          s += "})";
        }
        return s;
      },
      payload_);
}

std::strong_ordering operator<=>(const GroupElement &a, const GroupElement &b)
{
  if (auto c = a.payload_.index() <=> b.payload_.index(); c != 0)
    return c;
  return std::visit(
      [&](const auto &x) -> std::strong_ordering {
        using E = std::decay_t<decltype(x)>;
        return x <=> std::get<E>(b.payload_);
      },
      a.payload_);
}

bool EncodingLess::operator()(const GroupElement &a, const GroupElement &b) const
{
  return a.encode() < b.encode();
}

// ---------------------------------------------------------------------------
// GroupDescriptor

GroupDescriptor::GroupDescriptor(GroupKind kind, std::size_t dimension,
                                 std::vector<GroupElement> generators, bool includes_identity)
    : kind_(kind),
      dimension_(kind == GroupKind::Integers ? dimension : 0),
      generators_(std::move(generators)),
      includes_identity_(includes_identity)
{
  if (kind_ == GroupKind::Integers && dimension_ == 0)
    throw InvalidArgument("Z^d needs d >= 1");
  if (generators_.empty())
    throw InvalidArgument("generating set is empty");
  bool has_e = false;
  for (const auto &g : generators_) {
    if (!owns(g))
      throw TypeMismatch("generator " + g.to_string() + " is not in " + signature());
    if (std::find(generators_.begin(), generators_.end(), inv(g)) == generators_.end())
      throw InvalidArgument("generating set is not symmetric: missing inverse of " +
                            g.to_string());
    has_e = has_e || g.is_identity();
  }
  if (has_e != includes_identity_)
    throw InvalidArgument("identity membership of the generating set disagrees with configuration");
}

bool GroupDescriptor::owns(const GroupElement &g) const
{
  return g.kind() == kind_ && (kind_ != GroupKind::Integers || g.dimension() == dimension_);
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::integers(std::size_t dimension)
{
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < dimension; ++i) {
    for (std::int64_t s : {1, -1}) {
      std::vector<std::int64_t> c(dimension, 0);
      c[i] = s;
      gens.push_back(GroupElement::integers(std::span<const std::int64_t>(c)));
    }
  }
  return std::make_shared<const GroupDescriptor>(GroupKind::Integers, dimension, std::move(gens));
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::heisenberg()
{
  std::vector<GroupElement> gens{
      GroupElement::heisenberg(1, 0, 0), GroupElement::heisenberg(-1, 0, 0),
      GroupElement::heisenberg(0, 1, 0), GroupElement::heisenberg(0, -1, 0)};
  return std::make_shared<const GroupDescriptor>(GroupKind::Heisenberg, 0, std::move(gens));
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::lamplighter()
{
  std::vector<GroupElement> gens{GroupElement::lamplighter(1), GroupElement::lamplighter(-1),
                                 GroupElement::lamplighter(0, {0})};
  return std::make_shared<const GroupDescriptor>(GroupKind::Lamplighter, 0, std::move(gens));
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::standard(GroupKind kind,
                                                                 std::size_t dimension)
{
  switch (kind) {
    case GroupKind::Integers: return integers(dimension);
    case GroupKind::Heisenberg: return heisenberg();
    case GroupKind::Lamplighter: return lamplighter();
  }
  throw InvalidArgument("unknown group kind");
}

std::string GroupDescriptor::signature() const
{
  if (kind_ == GroupKind::Integers)
    return "integers:" + std::to_string(dimension_);
  return to_string(kind_);
}

std::shared_ptr<const GroupDescriptor> GroupDescriptor::from_signature(std::string_view sig)
{
  auto colon = sig.find(':');
  GroupKind kind = parse_group_kind(sig.substr(0, colon));
  std::size_t dim = 1;
  if (colon != std::string_view::npos) {
    try {
      dim = std::stoul(std::string(sig.substr(colon + 1)));
    } catch (const std::exception &) {
      throw ParseError("bad dimension in group signature '" + std::string(sig) + "'");
    }
  }
  return standard(kind, dim);
}

} // namespace folner
