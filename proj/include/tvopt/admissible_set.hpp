#ifndef TVOPT_ADMISSIBLE_SET_HPP
#define TVOPT_ADMISSIBLE_SET_HPP

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace tvopt {

/// The finite alphabet of allowed integer control values.
///
/// Holds an ordered list of d >= 2 pairwise distinct vectors in Z^M. All
/// control structures index into one of these sets; indices are 0-based in
/// code (printed 1-based where human-facing).
class AdmissibleSet {
 public:
  /// Throws std::invalid_argument on duplicate values, d < 2 or M < 1.
  explicit AdmissibleSet(std::vector<std::vector<int>> values);

  /// The box {lo, ..., hi}^dim, ordered lexicographically.
  static AdmissibleSet box(int dim, int lo, int hi);

  /// The dim unit vectors e_1, ..., e_dim (SOS1 encoding of "exactly one
  /// component active").
  static AdmissibleSet unit_vectors(int dim);

  int dim() const { return dim_; }                        // M
  int size() const { return static_cast<int>(values_.size()); }  // d

  const std::vector<int>& value(int idx) const { return values_[idx]; }
  const std::vector<std::vector<int>>& values() const { return values_; }

  /// Index of v in the set, or nullopt.
  std::optional<int> find(std::span<const int> v) const;

  /// L1 distance between values i and j.
  int l1_distance(int i, int j) const;

  /// Largest componentwise range max_i(max_k v_ik) - min_i(min_k v_ik);
  /// used to scale plotted gradients to the control axis.
  int component_range() const;

 private:
  std::vector<std::vector<int>> values_;
  int dim_ = 0;
};

using AlphabetPtr = std::shared_ptr<const AdmissibleSet>;

}  // namespace tvopt

#endif  // TVOPT_ADMISSIBLE_SET_HPP
