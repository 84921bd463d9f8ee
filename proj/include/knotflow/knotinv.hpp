#pragma once

// Invariants of closed braids and embedded polygons: Gauss linking,
// writhe and self-linking, Alexander polynomial from the reduced Burau
// representation, and identification against a small knot table.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotflow/laurent.hpp"
#include "knotflow/lorenz_template.hpp"
#include "knotflow/plcurve.hpp"

namespace knotflow::knots {

using lorenz::BraidWord;

enum class LinkingMethod { SignedCrossings, Quadrature };

/// Minimum distance between the two polygons.
double curve_distance(const PLCurve& c1, const PLCurve& c2);

/// Signed-crossing linking number in the projection along `direction`.
/// Throws DegenerateProjection when the projection is not regular
/// (crossings at vertices, tangential overlaps, or equal heights).
int linking_in_projection(const PLCurve& c1, const PLCurve& c2, const Vec3& direction);

/// SignedCrossings: projection linking number, retried over a fixed
/// sequence of directions until one is regular (the value is an integer).
/// Quadrature: Gauss double integral summed as exact solid angles of
/// segment pairs (a real within rounding of an integer).
/// Throws CurvesIntersect when the curves come within 1e-9.
double gauss_linking(const PLCurve& c1, const PLCurve& c2, LinkingMethod method);

struct WritheSl {
  int writhe = 0;
  int self_linking = 0;
};

/// writhe = exponent sum e, self-linking = e - strands. Throws NotAKnot
/// when the closure has more than one component.
WritheSl writhe_and_self_linking(const BraidWord& b);

/// Reduced Burau matrix of the braid, (n-1)×(n-1) over Z[t, 1/t].
std::vector<std::vector<LaurentPoly>> reduced_burau(const BraidWord& b);

/// Determinant by fraction-free elimination.
LaurentPoly determinant(std::vector<std::vector<LaurentPoly>> m);

/// Δ(t) = det(I - ρ(b)) (1 - t)/(1 - tⁿ), symmetrized with positive leading
/// coefficient. Throws NotAKnot for links.
LaurentPoly alexander(const BraidWord& b);

struct KnotReport {
  std::string word;
  int strands = 0;
  int crossings = 0;
  int exponent_sum = 0;
  int self_linking = 0;
  /// Genus of the Seifert surface of the closed braid, (c - n + 1)/2; an
  /// upper bound on the genus, attained by positive braids.
  int genus_bound = 0;
  LaurentPoly alexander;
  std::string name = "unknown";
  /// +1 all letters positive, -1 all negative, 0 mixed (1 for no letters).
  int homogeneity = 1;
};

/// Computes every field of the report, including the name.
KnotReport knot_report(const std::string& word, const BraidWord& b);

/// Table lookup: unknot, trefoils, figure-eight, T(2,5), T(2,7), T(3,4),
/// T(3,5); "unknown" whenever the data do not pin the knot down.
std::string identify(const KnotReport& r);

nlohmann::json to_json(const KnotReport& r);
nlohmann::json to_json(const LaurentPoly& p);

}  // namespace knotflow::knots
