#ifndef COLLAB_LAW_HPP_
#define COLLAB_LAW_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace collab {

// Inclusion-probability schedule F_n(k): the chance that a potential
// coauthor with k prior joint papers joins paper n.  The argument support
// at paper n is k = 0..n-1; outside it F_n is zero.
//
// Three shapes:
//   Constant   F_n(k) = p.
//   Linear     F_n(k) = a_n * k + b_n, with b_n in [0,1] and, for n >= 2,
//              -b_n/(n-1) <= a_n <= (1-b_n)/(n-1), so values stay in [0,1]
//              on the whole support.
//   Tabulated  F_n(k) = f(n, k), optionally clamped into [0,1]; unclamped
//              values outside [0,1] are rejected when evaluated.
class CoauthorshipLaw {
 public:
  using Sequence = std::function<double(std::size_t)>;       // n -> value
  using Table = std::function<double(std::size_t, std::size_t)>;  // (n,k)

  static CoauthorshipLaw constant(double p);
  // Sequences are validated for n = 1..validated_horizon at construction;
  // later n are validated on first use.
  static CoauthorshipLaw linear(Sequence a, Sequence b,
                                std::size_t validated_horizon = 4096);
  static CoauthorshipLaw linear(std::vector<double> a, std::vector<double> b);
  static CoauthorshipLaw tabulated(Table f, bool clamp);

  // F_n(k); n >= 1, zero outside the support.
  double evaluate(std::size_t n, std::size_t k) const;

  bool is_constant() const { return kind_ == Kind::kConstant; }
  bool is_linear() const { return kind_ != Kind::kTabulated; }
  double constant_p() const;
  double a(std::size_t n) const;  // Linear only (Constant: 0)
  double b(std::size_t n) const;  // Linear only (Constant: p)

 private:
  enum class Kind { kConstant, kLinear, kTabulated };

  CoauthorshipLaw() = default;
  void validate_linear(std::size_t n) const;

  Kind kind_ = Kind::kConstant;
  double p_ = 0;
  Sequence a_, b_;
  std::size_t validated_horizon_ = 0;
  Table table_;
  bool clamp_ = false;
};

}  // namespace collab

#endif  // COLLAB_LAW_HPP_
