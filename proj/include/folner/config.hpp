#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "folner/omega.hpp"
#include "folner/schedule.hpp"
#include "folner/subset.hpp"

namespace folner {

struct FamilySpec {
  enum class Type { Balls, Lamplighter, Custom };
  enum class Growth { Poly, Linear };
  Type type = Type::Balls;
  // Balls: poly means radius 2^{n^2} at index n, linear means radius n.
  Growth growth = Growth::Poly;
  std::vector<std::string> files;     // custom listings, index n -> files[n-1]
  std::vector<std::uint64_t> indices; // direct-mode chain indices
};

struct ExtractionSpec {
  bool extract = false;
  std::uint64_t first_index = 1;
  std::uint64_t max_index = 16;
  bool accept_best = false;
};

struct CapsSpec {
  std::size_t set_size = std::size_t{1} << 22;
  std::optional<std::size_t> convolution;
};

struct ObservableSpec {
  enum class Kind { Indicator, Values, Matrix, Constant };
  Kind kind = Kind::Indicator;
  std::vector<std::uint32_t> states;
  std::vector<Rational> values;
  std::vector<std::vector<Rational>> rows;
  Rational constant = 1;
};

struct ActionSpec {
  std::uint32_t modulus = 8;
  bool matrix = false;
  std::vector<ObservableSpec> observables;
  std::size_t random_observables = 0;
  std::vector<std::uint64_t> convergence_indices;
  Rational tolerance{1, 1000};
  std::vector<Rational> eps;
  std::size_t kadison_trials = 0;
  int level = 0; // 0 means the chain depth
};

struct SweepSpec {
  std::vector<Rational> t_bases;
  std::vector<std::uint64_t> n_bases;
};

struct RunConfig {
  GroupPtr group;
  FamilySpec family;
  Schedule sched;
  std::optional<std::uint64_t> steps_override;
  ExtractionSpec extraction;
  CapsSpec caps;
  ActionSpec action;
  std::uint64_t census_max_n = 6;
  SweepSpec sweep;
  std::uint64_t seed = 0;
  // Directory relative paths in the config resolve against.
  std::string base_dir = ".";

  Limits limits() const { return Limits{caps.set_size}; }
};

// Throws ParseError (malformed) or InvalidArgument (violated invariant).
RunConfig parse_config(const nlohmann::json &j, const std::string &base_dir = ".");

// F at family index n (n >= 1).
FiniteSubset family_member(const RunConfig &cfg, std::uint64_t n);

} // namespace folner
