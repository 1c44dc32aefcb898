#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmlog/ball.hpp"
#include "cmlog/mpoly.hpp"
#include "cmlog/rational.hpp"

namespace cmlog {

enum class Status { cm, not_cm, unknown };

enum class Ternary { yes, no, unknown };

// strict-positivity certificate for a univariate polynomial: certified
// positive on each listed interval, covering [-radius, radius], and
// dominated by the leading term outside
struct PositivityCover {
  Rational radius;
  std::vector<std::pair<Rational, Rational>> intervals;
};

// q >= Y^T (G - epsilon I) Y with G - epsilon I certified PSD over the
// monomial basis Y
struct GramCertificate {
  std::vector<Exponent> basis;
  std::vector<std::vector<Rational>> gram;
  Rational epsilon;
};

// all elimination pivots sign-certified positive (printed enclosures)
struct PsdCertificate {
  std::vector<std::string> pivots;
};

struct Verdict {
  Status status = Status::unknown;
  std::optional<PositivityCover> cover;
  std::optional<GramCertificate> gram;
  std::optional<PsdCertificate> psd;
  // witness in y-coordinates (y_i = log t_i); NOT_CM always carries one
  std::optional<std::vector<Rational>> witness;
  // printed enclosure of the witness value and of t_i = exp(y_i)
  std::string witness_value;
  std::vector<std::string> witness_density_point;
  mpfr_prec_t precision_used = 0;
  std::string notes;
};

}  // namespace cmlog
