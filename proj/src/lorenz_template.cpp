#include "knotflow/lorenz_template.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "knotflow/errors.hpp"

namespace knotflow::lorenz {

TemplateSpec lorenz_like(int m, int n, bool starred) { return TemplateSpec{m, n, starred}; }

// ---------------------------------------------------------------- words

namespace {

bool is_power(const std::string& s) {
  const std::string doubled = s + s;
  return doubled.find(s, 1) < s.size();
}

std::string least_rotation(const std::string& s) {
  std::string best = s;
  for (std::size_t i = 1; i < s.size(); ++i) best = std::min(best, s.substr(i) + s.substr(0, i));
  return best;
}

}  // namespace

CyclicWord::CyclicWord(std::string_view symbols) {
  if (symbols.empty()) throw std::invalid_argument("orbit word must be nonempty");
  for (char c : symbols)
    if (c != 'x' && c != 'y') throw std::invalid_argument("orbit words use only x and y");
  s_ = least_rotation(std::string(symbols));
  aperiodic_ = !is_power(s_);
}

std::size_t CyclicWord::count(char c) const { return static_cast<std::size_t>(std::count(s_.begin(), s_.end(), c)); }

std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b) {
  if (auto c = a.s_.size() <=> b.s_.size(); c != 0) return c;
  return a.s_.compare(b.s_) <=> 0;
}

std::vector<CyclicWord> enumerate_words(int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be at least 1");
  // Duval's generation of Lyndon words (least rotations of aperiodic necklaces).
  std::vector<CyclicWord> out;
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    std::string s;
    for (int c : w) s.push_back(c == 0 ? 'x' : 'y');
    out.emplace_back(s);
    const std::size_t m = w.size();
    while (w.size() < static_cast<std::size_t>(max_len)) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == 1) w.pop_back();
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(Universality u) {
  switch (u) {
    case Universality::Universal: return "Universal";
    case Universality::NotUniversal: return "NotUniversal";
    case Universality::Unknown: return "Unknown";
  }
  return "Unknown";
}

Universality universal_predicate(int m, int n, bool starred) {
  const long long mm = starred ? -static_cast<long long>(m) : m;
  const long long nn = starred ? -static_cast<long long>(n) : n;
  if (mm * nn < 0) return Universality::Unknown;
  return (mm * nn == 0 && mm + nn < 0) ? Universality::Universal : Universality::NotUniversal;
}

// ---------------------------------------------------------------- braids

BraidWord::BraidWord(int strands, std::vector<BraidLetter> letters)
    : strands_(strands), letters_(std::move(letters)) {
  if (strands_ < 1) throw std::invalid_argument("braid needs at least one strand");
  for (const BraidLetter& l : letters_) {
    if (l.index < 1 || l.index >= strands_)
      throw std::invalid_argument("braid generator index out of range");
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("braid letter sign must be +1 or -1");
  }
}

int BraidWord::exponent_sum() const {
  int e = 0;
  for (const BraidLetter& l : letters_) e += l.sign;
  return e;
}

bool BraidWord::positive() const {
  return std::all_of(letters_.begin(), letters_.end(), [](const BraidLetter& l) { return l.sign > 0; });
}

bool BraidWord::negative() const {
  return std::all_of(letters_.begin(), letters_.end(), [](const BraidLetter& l) { return l.sign < 0; });
}

std::vector<int> BraidWord::permutation() const {
  // at[q] = starting position of the strand currently at position q
  std::vector<int> at(strands_);
  std::iota(at.begin(), at.end(), 0);
  for (const BraidLetter& l : letters_) std::swap(at[l.index - 1], at[l.index]);
  std::vector<int> perm(strands_);
  for (int q = 0; q < strands_; ++q) perm[at[q]] = q;
  return perm;
}

int BraidWord::components() const {
  const std::vector<int> perm = permutation();
  std::vector<bool> seen(strands_, false);
  int cycles = 0;
  for (int p = 0; p < strands_; ++p) {
    if (seen[p]) continue;
    ++cycles;
    for (int q = p; !seen[q]; q = perm[q]) seen[q] = true;
  }
  return cycles;
}

std::string BraidWord::to_string() const {
  if (letters_.empty()) return "1";
  std::string out;
  for (const BraidLetter& l : letters_) {
    if (!out.empty()) out += ' ';
    out += 's' + std::to_string(l.index);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

namespace {

struct Strand {
  std::string rot;
  int word;
  std::size_t offset;
};

// Order of x^∞-style periodic sequences; distinct orbits never tie.
bool periodic_less(const std::string& a, const std::string& b) {
  const std::size_t n = a.size() + b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char ca = a[i % a.size()], cb = b[i % b.size()];
    if (ca != cb) return ca < cb;
  }
  return false;
}

void append_full_twists(std::vector<BraidLetter>& out, int first, int size, int power) {
  if (size < 2 || power == 0) return;
  const int sign = power > 0 ? 1 : -1;
  for (int rep = 0; rep < std::abs(power); ++rep)
    for (int k = 0; k < size; ++k)
      for (int i = first; i < first + size - 1; ++i) out.push_back({i, sign});
}

}  // namespace

BraidWord orbits_braid(const TemplateSpec& t, const std::vector<CyclicWord>& words,
                       std::vector<int>* component) {
  if (words.empty()) throw std::invalid_argument("no orbit words given");
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!words[i].aperiodic()) throw PeriodicWord("word " + words[i].symbols() + " is a proper power");
    for (std::size_t j = 0; j < i; ++j)
      if (words[i] == words[j]) throw SameOrbit("word " + words[i].symbols() + " appears twice");
  }

  std::vector<Strand> strands;
  for (std::size_t w = 0; w < words.size(); ++w)
    for (std::size_t k = 0; k < words[w].length(); ++k)
      strands.push_back({words[w].rotation(k), static_cast<int>(w), k});
  std::sort(strands.begin(), strands.end(),
            [](const Strand& a, const Strand& b) { return periodic_less(a.rot, b.rot); });
  const int N = static_cast<int>(strands.size());

  // Shift permutation: rotation at offset k moves to offset k+1.
  std::vector<int> target(N);
  for (int r = 0; r < N; ++r) {
    const Strand& s = strands[r];
    const std::size_t next = (s.offset + 1) % words[s.word].length();
    for (int q = 0; q < N; ++q)
      if (strands[q].word == s.word && strands[q].offset == next) target[r] = q;
  }
  if (component) {
    component->resize(N);
    for (int r = 0; r < N; ++r) (*component)[r] = strands[r].word;
  }

  const int nx = static_cast<int>(
      std::count_if(strands.begin(), strands.end(), [](const Strand& s) { return s.rot[0] == 'x'; }));
  std::vector<BraidLetter> letters;
  append_full_twists(letters, 1, nx, t.m);
  append_full_twists(letters, nx + 1, N - nx, t.n);

  // Permutation braid by bubble sort on the targets; each swap is an
  // x strand passing a y strand at the branch line.
  std::vector<int> key = target;
  const int sign = t.crossing_sign();
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (int i = 0; i + 1 < N; ++i)
      if (key[i] > key[i + 1]) {
        std::swap(key[i], key[i + 1]);
        letters.push_back({i + 1, sign});
        swapped = true;
      }
  }
  return BraidWord(N, std::move(letters));
}

BraidWord word_to_braid(const TemplateSpec& t, const CyclicWord& w) { return orbits_braid(t, {w}); }

int pair_linking(const TemplateSpec& t, const CyclicWord& w1, const CyclicWord& w2) {
  if (w1 == w2) throw SameOrbit("words " + w1.symbols() + " and " + w2.symbols() + " are one orbit");
  std::vector<int> comp;
  const BraidWord b = orbits_braid(t, {w1, w2}, &comp);
  std::vector<int> at = comp;  // component of the strand at each position
  int sum = 0;
  for (const BraidLetter& l : b.letters()) {
    if (at[l.index - 1] != at[l.index]) sum += l.sign;
    std::swap(at[l.index - 1], at[l.index]);
  }
  return sum / 2;
}

// ---------------------------------------------------------------- curves

std::vector<PLCurve> words_to_curves(const TemplateSpec& t, const std::vector<CyclicWord>& words,
                                     const CurveGeometry& g) {
  if (g.samples_per_arc < 4) throw std::invalid_argument("samples_per_arc must be at least 4");
  std::vector<int> comp;
  const BraidWord b = orbits_braid(t, words, &comp);
  const int N = b.strands();
  int nx = 0;
  for (const CyclicWord& w : words)
    for (std::size_t k = 0; k < w.length(); ++k)
      if (w.rotation(k)[0] == 'x') ++nx;
  const auto radius = [&](double pos) {
    const double gap = pos > nx - 1 ? std::min(1.0, pos - (nx - 1)) * g.ear_gap : 0.0;
    return g.inner_radius + g.spacing * pos + gap;
  };

  const std::vector<BraidLetter>& letters = b.letters();
  const int slots = std::max<int>(1, static_cast<int>(letters.size()));
  const int S = g.samples_per_arc;

  // One pass: for every starting position, the sampled (φ, radius, z)
  // track and the final position.
  struct Pass {
    std::vector<Vec3> points;
    int end = 0;
  };
  std::vector<Pass> passes(N);
  for (int p = 0; p < N; ++p) {
    int pos = p;
    for (int k = 0; k < slots; ++k) {
      int from = pos, to = pos;
      double lift = 0.0;
      if (!letters.empty()) {
        const BraidLetter& l = letters[k];
        if (pos == l.index - 1) {
          to = pos + 1;
          lift = l.sign;  // outward strand passes above for positive letters
        } else if (pos == l.index) {
          to = pos - 1;
          lift = -l.sign;
        }
      }
      for (int s = 0; s < S; ++s) {
        const double tau = static_cast<double>(s) / S;
        const double phi = kTwoPi * (k + tau) / slots;
        const double ease = tau * tau * (3 - 2 * tau);
        const double r = radius(from + (to - from) * ease);
        const double z = g.clearance * lift * std::sin(kPi * tau);
        passes[p].points.push_back({r * std::cos(phi), r * std::sin(phi), z});
      }
      pos = to;
    }
    passes[p].end = pos;
  }

  std::vector<PLCurve> curves;
  for (std::size_t w = 0; w < words.size(); ++w) {
    int start = -1;
    for (int p = 0; p < N && start < 0; ++p)
      if (comp[p] == static_cast<int>(w)) start = p;
    std::vector<Vec3> pts;
    int p = start;
    do {
      pts.insert(pts.end(), passes[p].points.begin(), passes[p].points.end());
      p = passes[p].end;
    } while (p != start);
    curves.emplace_back(std::move(pts));
  }
  return curves;
}

PLCurve word_to_curve(const TemplateSpec& t, const CyclicWord& w, const CurveGeometry& g) {
  return words_to_curves(t, {w}, g).front();
}

}  // namespace knotflow::lorenz
