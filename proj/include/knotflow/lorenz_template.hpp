#pragma once

// Lorenz-like templates L(m, n) and L*(m, n): symbolic orbits of the full
// 2-shift, their braids and embedded curves.
//
// Orbits are aperiodic necklaces over {x < y}. The strands of an orbit
// sit on the branch line in the lexicographic order of the word's
// rotations (compared as infinite periodic sequences); one pass through
// the template applies the ear twists and then the shift permutation.

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "knotflow/plcurve.hpp"

namespace knotflow::lorenz {

struct TemplateSpec {
  int m = 0;  ///< signed full twists of the x ear, positive = left-handed
  int n = 0;  ///< signed full twists of the y ear
  bool starred = false;

  /// +1 when x strands cross over y strands at the branch line, -1 for L*.
  int crossing_sign() const { return starred ? -1 : 1; }
};

TemplateSpec lorenz_like(int m, int n, bool starred);

/// Orbit word stored as its least rotation.
class CyclicWord {
 public:
  /// Accepts a nonempty string over {x, y}; throws std::invalid_argument
  /// otherwise.
  explicit CyclicWord(std::string_view symbols);

  const std::string& symbols() const { return s_; }
  std::size_t length() const { return s_.size(); }
  /// Not a proper power of a shorter word.
  bool aperiodic() const { return aperiodic_; }
  std::size_t count(char c) const;
  /// Rotation starting at position i of the canonical form.
  std::string rotation(std::size_t i) const { return s_.substr(i) + s_.substr(0, i); }

  friend bool operator==(const CyclicWord& a, const CyclicWord& b) { return a.s_ == b.s_; }
  /// Length first, then lexicographic.
  friend std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b);

 private:
  std::string s_;
  bool aperiodic_ = true;
};

/// All aperiodic binary necklaces of length 1..max_len, sorted by
/// (length, lexicographic).
std::vector<CyclicWord> enumerate_words(int max_len);

enum class Universality { Universal, NotUniversal, Unknown };
const char* to_string(Universality u);

/// For mn ≥ 0: L(m, n) is universal iff mn = 0 and m + n < 0; L*(m, n)
/// is decided by the same rule applied to (-m, -n). Unknown for mn < 0.
Universality universal_predicate(int m, int n, bool starred);

struct BraidLetter {
  int index = 1;  ///< Artin generator σ_index, 1 ≤ index < strands
  int sign = 1;   ///< +1 or -1

  friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

class BraidWord {
 public:
  explicit BraidWord(int strands, std::vector<BraidLetter> letters = {});

  int strands() const { return strands_; }
  const std::vector<BraidLetter>& letters() const { return letters_; }
  int crossings() const { return static_cast<int>(letters_.size()); }
  int exponent_sum() const;
  bool positive() const;
  bool negative() const;
  /// perm[p] = final position of the strand starting at position p (0-based).
  std::vector<int> permutation() const;
  /// Number of cycles of the permutation, i.e. components of the closure.
  int components() const;
  /// Space-separated letters, e.g. "s1 s2^-1"; "1" for the empty word.
  std::string to_string() const;

 private:
  int strands_;
  std::vector<BraidLetter> letters_;
};

/// Braid of a single orbit. Throws PeriodicWord for proper powers.
BraidWord word_to_braid(const TemplateSpec& t, const CyclicWord& w);

/// Braid of several distinct orbits carried together, strands of all
/// words merged into one branch line order. `component` receives, for
/// every starting strand position, the index of its word.
BraidWord orbits_braid(const TemplateSpec& t, const std::vector<CyclicWord>& words,
                       std::vector<int>* component = nullptr);

/// Half the signed count of crossings between the two orbits in their
/// common braid. Throws SameOrbit when w1 and w2 coincide.
int pair_linking(const TemplateSpec& t, const CyclicWord& w1, const CyclicWord& w2);

/// Embedding parameters for closed-braid curves around the z axis.
struct CurveGeometry {
  double inner_radius = 3.0;    ///< radius of branch line position 0
  double spacing = 1.0;         ///< radial distance between adjacent strands
  double ear_gap = 0.5;         ///< extra radial gap between x and y blocks
  double clearance = 0.35;      ///< vertical offset of strands at a crossing
  int samples_per_arc = 24;     ///< vertices per crossing slot and strand
};

/// Closed-braid embedding of the orbit: each branch line pass is one turn
/// around the z axis starting on the positive x axis, crossings are
/// realized as radial swaps with vertical clearance.
PLCurve word_to_curve(const TemplateSpec& t, const CyclicWord& w, const CurveGeometry& g = {});

/// Joint embedding of several orbits, one curve per word, pairwise disjoint.
std::vector<PLCurve> words_to_curves(const TemplateSpec& t, const std::vector<CyclicWord>& words,
                                     const CurveGeometry& g = {});

}  // namespace knotflow::lorenz
