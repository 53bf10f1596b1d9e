#ifndef COLLAB_CONFIG_HPP_
#define COLLAB_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "collab/intensity.hpp"
#include "collab/law.hpp"

namespace collab {

// Flat key-value config: `key = value` lines, `#` comments, repeated keys
// allowed (used for intensity segments).  Every key must be consumed by
// the reader; leftovers are reported as errors so typos never pass silently.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);
  static ConfigMap parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key);
  std::string get_string_or(const std::string& key, const std::string& fallback);
  double get_number(const std::string& key);
  double get_number_or(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key);
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback);
  // All values of a repeated key, in file order; marks them consumed.
  std::vector<std::string> get_all(const std::string& key);

  // Overwrites (or adds) a key; removes other occurrences.
  void set(const std::string& key, const std::string& value);

  // Throws listing every unconsumed key.
  void reject_unknown() const;

  // Canonical text (normalized `key = value` lines, file order).
  std::string to_text() const;

 private:
  struct Entry {
    std::string key;
    std::string value;
    bool used = false;
  };
  std::vector<Entry> entries_;
};

// Whitespace-separated tokens of a value.
std::vector<std::string> split_tokens(const std::string& value);

// Builders for the two model specs.  Law keys:
//   law.kind = constant | linear | affine_k_clamped | ramp_n_clamped |
//              harmonic_linear
//     constant:        law.p
//     linear:          law.a, law.b              (n-independent)
//     affine_k_clamped law.slope, law.intercept  F = min(slope k + icept, 1)
//     ramp_n_clamped:  law.denominator           F = min(n / denom, 1)
//     harmonic_linear: law.a_scale, law.b_scale, law.log_base (e | 10)
//                      a_n = a_scale / n, b_n = b_scale (1 - 1/log(n+2))
// Intensity keys:
//   intensity.kind = constant | segments
//     constant: intensity.rate
//     segments: repeated `intensity.segment = start end const RATE`
//               or `... = start end linear SLOPE INTERCEPT [cap CAP]`,
//               end may be `inf`.
CoauthorshipLaw build_law(ConfigMap& cfg);
IntensityFunction build_intensity(ConfigMap& cfg);

}  // namespace collab

#endif  // COLLAB_CONFIG_HPP_
