#pragma once
// Augmented balanced tree answering donation wealth queries in logarithmic time.

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace ofdr {

/// Rejected hypotheses live in an AVL tree keyed by (gamma (E - 1), index); each
/// node carries subtree sums of gamma E, gamma and the node count. Unrejected
/// hypotheses contribute gamma (E ^ 1) to a scalar mass.
///
/// wealth(c) = sum over rejected of min(gamma E - c, gamma) + unrejected mass.
/// The gamma E - c branch is taken exactly when key <= c.
class WealthLedger {
 public:
  /// Adds a rejected hypothesis. If `index` was counted as unrejected, its
  /// contribution is removed from the mass first. Throws std::logic_error when
  /// the index is already in the tree.
  void insert(std::size_t index, double gamma, double e);
  /// Records an unrejected hypothesis: mass += gamma (e ^ 1). With `revocable`,
  /// the contribution is remembered so a later insert of the same index removes it.
  void add_unrejected(std::size_t index, double gamma, double e, bool revocable = false);

  double wealth(double threshold) const;

  std::size_t size() const { return live_; }
  double unrejected_mass() const { return mass_; }
  bool contains(std::size_t index) const;

  /// Tree nodes touched by the most recent insert or wealth call.
  std::size_t last_visits() const { return visits_; }
  /// Recomputes every augmented field; true when all agree within 1e-9 relative.
  bool check_invariants() const;
  std::size_t height() const;

 private:
  struct Node {
    double key;
    std::size_t index;
    double ge;
    double g;
    double sum_ge;
    double sum_g;
    std::size_t count;
    int height;
    std::int32_t left;
    std::int32_t right;
  };

  static bool less(const Node& a, double key, std::size_t index);
  int h(std::int32_t n) const { return n < 0 ? 0 : nodes_[n].height; }
  void pull(std::int32_t n);
  std::int32_t rotate_left(std::int32_t n);
  std::int32_t rotate_right(std::int32_t n);
  std::int32_t balance(std::int32_t n);
  std::int32_t insert_at(std::int32_t n, std::int32_t fresh);

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::size_t live_ = 0;
  double mass_ = 0.0;
  std::unordered_map<std::size_t, double> unrejected_;
  std::unordered_map<std::size_t, char> members_;
  mutable std::size_t visits_ = 0;
};

}  // namespace ofdr
