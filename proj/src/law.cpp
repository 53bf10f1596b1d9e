#include "collab/law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace collab {

CoauthorshipLaw CoauthorshipLaw::constant(double p) {
  if (!(p >= 0 && p <= 1))
    throw std::invalid_argument("law: constant p outside [0,1]");
  CoauthorshipLaw law;
  law.kind_ = Kind::kConstant;
  law.p_ = p;
  return law;
}

void CoauthorshipLaw::validate_linear(std::size_t n) const {
  double an = a_(n);
  double bn = b_(n);
  if (!std::isfinite(an) || !std::isfinite(bn))
    throw std::invalid_argument("law: non-finite linear coefficients at n=" +
                                std::to_string(n));
  if (!(bn >= 0 && bn <= 1))
    throw std::invalid_argument("law: b_n outside [0,1] at n=" +
                                std::to_string(n));
  if (n >= 2) {
    // Closed admissible interval; 1e-12 slack absorbs rounding at the ends.
    double span = static_cast<double>(n - 1);
    if (an * span < -bn - 1e-12 || an * span > 1 - bn + 1e-12)
      throw std::invalid_argument("law: a_n outside admissible range at n=" +
                                  std::to_string(n));
  }
}

CoauthorshipLaw CoauthorshipLaw::linear(Sequence a, Sequence b,
                                        std::size_t validated_horizon) {
  if (!a || !b) throw std::invalid_argument("law: null sequence");
  CoauthorshipLaw law;
  law.kind_ = Kind::kLinear;
  law.a_ = std::move(a);
  law.b_ = std::move(b);
  law.validated_horizon_ = validated_horizon;
  for (std::size_t n = 1; n <= validated_horizon; ++n) law.validate_linear(n);
  return law;
}

CoauthorshipLaw CoauthorshipLaw::linear(std::vector<double> a,
                                        std::vector<double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("law: sequence length mismatch");
  if (a.empty()) throw std::invalid_argument("law: empty sequences");
  std::size_t len = a.size();
  auto av = [a = std::move(a)](std::size_t n) { return a.at(n - 1); };
  auto bv = [b = std::move(b)](std::size_t n) { return b.at(n - 1); };
  return linear(std::move(av), std::move(bv), len);
}

CoauthorshipLaw CoauthorshipLaw::tabulated(Table f, bool clamp) {
  if (!f) throw std::invalid_argument("law: null table");
  CoauthorshipLaw law;
  law.kind_ = Kind::kTabulated;
  law.table_ = std::move(f);
  law.clamp_ = clamp;
  return law;
}

double CoauthorshipLaw::evaluate(std::size_t n, std::size_t k) const {
  if (n == 0) throw std::invalid_argument("law: event index starts at 1");
  if (k > n - 1) return 0;
  switch (kind_) {
    case Kind::kConstant:
      return p_;
    case Kind::kLinear: {
      if (n > validated_horizon_) validate_linear(n);
      // Admissibility allows 1e-12 slack, so trim rounding residue.
      return std::clamp(a_(n) * static_cast<double>(k) + b_(n), 0.0, 1.0);
    }
    case Kind::kTabulated: {
      double v = table_(n, k);
      if (clamp_) return std::clamp(v, 0.0, 1.0);
      if (!(v >= 0 && v <= 1))
        throw std::domain_error("law: tabulated value outside [0,1]");
      return v;
    }
  }
  return 0;
}

double CoauthorshipLaw::constant_p() const {
  if (kind_ != Kind::kConstant)
    throw std::logic_error("law: not a constant law");
  return p_;
}

double CoauthorshipLaw::a(std::size_t n) const {
  if (kind_ == Kind::kConstant) return 0;
  if (kind_ != Kind::kLinear) throw std::logic_error("law: not linear");
  return a_(n);
}

double CoauthorshipLaw::b(std::size_t n) const {
  if (kind_ == Kind::kConstant) return p_;
  if (kind_ != Kind::kLinear) throw std::logic_error("law: not linear");
  return b_(n);
}

}  // namespace collab
