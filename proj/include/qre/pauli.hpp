// Copyright 2026 The qre authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qre {

enum class PauliLetter : uint8_t { I, X, Y, Z };

// Pauli word over n qubits, encoded as paired X/Z bitmasks. Qubit q owns bit
// q of each mask; letter (x, z) is I=(0,0), X=(1,0), Y=(1,1), Z=(0,1).
struct PauliWord {
  int n = 0;
  uint64_t x = 0;
  uint64_t z = 0;

  static PauliWord identity(int n) {
    check_size(n);
    return PauliWord{n, 0, 0};
  }

  // Parses an n-letter string over IXYZ; character k is the letter on qubit k.
  static PauliWord from_string(std::string_view letters) {
    check_size(static_cast<int>(letters.size()));
    PauliWord w{static_cast<int>(letters.size()), 0, 0};
    for (size_t q = 0; q < letters.size(); ++q) {
      switch (letters[q]) {
        case 'I': break;
        case 'X': w.x |= uint64_t{1} << q; break;
        case 'Y': w.x |= uint64_t{1} << q; w.z |= uint64_t{1} << q; break;
        case 'Z': w.z |= uint64_t{1} << q; break;
        default:
          throw std::invalid_argument("invalid Pauli letter '" +
                                      std::string(1, letters[q]) + "'");
      }
    }
    return w;
  }

  static PauliWord single(int n, int q, PauliLetter p) {
    check_size(n);
    if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
    PauliWord w{n, 0, 0};
    w.set(q, p);
    return w;
  }

  PauliLetter letter(int q) const {
    bool xb = (x >> q) & 1, zb = (z >> q) & 1;
    if (xb && zb) return PauliLetter::Y;
    if (xb) return PauliLetter::X;
    if (zb) return PauliLetter::Z;
    return PauliLetter::I;
  }

  void set(int q, PauliLetter p) {
    uint64_t bit = uint64_t{1} << q;
    x &= ~bit;
    z &= ~bit;
    if (p == PauliLetter::X || p == PauliLetter::Y) x |= bit;
    if (p == PauliLetter::Z || p == PauliLetter::Y) z |= bit;
  }

  bool is_identity() const { return x == 0 && z == 0; }

  int weight() const { return std::popcount(x | z); }

  std::string to_string() const {
    std::string s(static_cast<size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
      switch (letter(q)) {
        case PauliLetter::I: break;
        case PauliLetter::X: s[q] = 'X'; break;
        case PauliLetter::Y: s[q] = 'Y'; break;
        case PauliLetter::Z: s[q] = 'Z'; break;
      }
    }
    return s;
  }

  friend bool operator==(const PauliWord&, const PauliWord&) = default;

 private:
  static void check_size(int n) {
    if (n < 0 || n > 64) throw std::invalid_argument("qubit count must be in [0, 64]");
  }
};

// Lexicographic order on the letter string (I < X < Y < Z per qubit).
inline bool lex_less(const PauliWord& a, const PauliWord& b) {
  for (int q = 0; q < std::min(a.n, b.n); ++q) {
    auto la = static_cast<uint8_t>(a.letter(q));
    auto lb = static_cast<uint8_t>(b.letter(q));
    if (la != lb) return la < lb;
  }
  return a.n < b.n;
}

struct PauliProduct {
  std::complex<double> phase;  // one of +1, -1, +i, -i
  PauliWord word;
};

namespace detail {

inline void check_same_n(const PauliWord& a, const PauliWord& b) {
  if (a.n != b.n) throw std::invalid_argument("Pauli word size mismatch");
}

// Exponent of i for the single-qubit product P(x1,z1) * P(x2,z2), indexed by
// x1<<3 | z1<<2 | x2<<1 | z2.  XY=iZ, YZ=iX, ZX=iY and their reverses.
inline constexpr int kPhaseExp[16] = {
    0, 0, 0, 0,   // I *
    0, 0, 1, 3,   // Z * {I, Z, X, Y}
    0, 3, 0, 1,   // X * {I, Z, X, Y}
    0, 1, 3, 0};  // Y * {I, Z, X, Y}

}  // namespace detail

inline PauliProduct multiply(const PauliWord& a, const PauliWord& b) {
  detail::check_same_n(a, b);
  int exp = 0;
  uint64_t active = (a.x | a.z) & (b.x | b.z);
  for (uint64_t m = active; m != 0; m &= m - 1) {
    int q = std::countr_zero(m);
    int idx = (((a.x >> q) & 1) << 3) | (((a.z >> q) & 1) << 2) |
              (((b.x >> q) & 1) << 1) | ((b.z >> q) & 1);
    exp += detail::kPhaseExp[idx];
  }
  static const std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {kI[exp % 4], PauliWord{a.n, a.x ^ b.x, a.z ^ b.z}};
}

inline bool commutes(const PauliWord& a, const PauliWord& b) {
  detail::check_same_n(a, b);
  // Symplectic form: parity of anticommuting positions.
  int s = std::popcount(a.x & b.z) + std::popcount(a.z & b.x);
  return (s & 1) == 0;
}

inline bool qubit_wise_commutes(const PauliWord& a, const PauliWord& b) {
  detail::check_same_n(a, b);
  uint64_t both = (a.x | a.z) & (b.x | b.z);
  uint64_t differ = (a.x ^ b.x) | (a.z ^ b.z);
  return (both & differ) == 0;
}

struct PauliTerm {
  double coefficient = 0.0;
  PauliWord word;
};

// Real-weighted sum of distinct Pauli words.  The all-I component is kept as
// a scalar offset so circuits and groupings never see it.
class PauliSum {
 public:
  static constexpr double kDropTolerance = 1e-12;

  explicit PauliSum(int n) : n_(n) {
    if (n < 0 || n > 64) throw std::invalid_argument("qubit count must be in [0, 64]");
  }

  int n() const { return n_; }
  double identity_offset() const { return offset_; }
  void set_identity_offset(double v) { offset_ = v; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  size_t num_terms() const { return terms_.size(); }

  void add(double coefficient, const PauliWord& word) {
    if (word.n != n_) throw std::invalid_argument("Pauli word size mismatch");
    if (word.is_identity()) {
      offset_ += coefficient;
      return;
    }
    auto key = std::make_pair(word.x, word.z);
    auto it = index_.find(key);
    if (it == index_.end()) {
      index_.emplace(key, terms_.size());
      terms_.push_back(PauliTerm{coefficient, word});
    } else {
      terms_[it->second].coefficient += coefficient;
    }
  }

  void add(const PauliTerm& t) { add(t.coefficient, t.word); }

  void add(const PauliSum& other) {
    if (other.n_ != n_) throw std::invalid_argument("Pauli sum size mismatch");
    offset_ += other.offset_;
    for (const auto& t : other.terms_) add(t);
  }

  // Drops terms below the tolerance and fixes a deterministic term order
  // (lexicographic by word).
  void normalize(double drop_tolerance = kDropTolerance) {
    std::erase_if(terms_, [&](const PauliTerm& t) {
      return std::abs(t.coefficient) < drop_tolerance;
    });
    std::sort(terms_.begin(), terms_.end(), [](const PauliTerm& a, const PauliTerm& b) {
      return lex_less(a.word, b.word);
    });
    index_.clear();
    for (size_t i = 0; i < terms_.size(); ++i) {
      index_.emplace(std::make_pair(terms_[i].word.x, terms_[i].word.z), i);
    }
  }

  double coefficient_of(const PauliWord& word) const {
    if (word.is_identity()) return offset_;
    auto it = index_.find(std::make_pair(word.x, word.z));
    return it == index_.end() ? 0.0 : terms_[it->second].coefficient;
  }

  // |offset| + sum |h_i|; a triangle-inequality upper bound on the spectral norm.
  double norm_upper_bound() const {
    double s = std::abs(offset_);
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coefficient));
    return m;
  }

 private:
  int n_;
  double offset_ = 0.0;
  std::vector<PauliTerm> terms_;
  std::map<std::pair<uint64_t, uint64_t>, size_t> index_;
};

// ---- Jordan-Wigner -------------------------------------------------------

struct FermionOp {
  int mode = 0;
  bool dagger = false;
};

struct FermionTerm {
  double coefficient = 0.0;
  std::vector<FermionOp> factors;  // applied right to left, at most quartic
};

namespace detail {

using ComplexWordMap = std::map<std::pair<uint64_t, uint64_t>, std::complex<double>>;

// a_j    = Z_0..Z_{j-1} (X_j + iY_j)/2
// a_j^+  = Z_0..Z_{j-1} (X_j - iY_j)/2
inline void jw_accumulate(ComplexWordMap& acc, const FermionTerm& term, int n_modes) {
  ComplexWordMap cur;
  cur[{0, 0}] = term.coefficient;
  // Factors act right to left; left-multiply in sequence order.
  for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
    if (it->mode < 0 || it->mode >= n_modes)
      throw std::out_of_range("fermionic mode index out of range");
    ComplexWordMap out;
    PauliWord tailx{n_modes, 0, 0}, taily{n_modes, 0, 0};
    for (int k = 0; k < it->mode; ++k) {
      tailx.set(k, PauliLetter::Z);
      taily.set(k, PauliLetter::Z);
    }
    tailx.set(it->mode, PauliLetter::X);
    taily.set(it->mode, PauliLetter::Y);
    std::complex<double> cy = it->dagger ? std::complex<double>(0, -0.5)
                                         : std::complex<double>(0, 0.5);
    for (const auto& [key, coeff] : cur) {
      PauliWord w{n_modes, key.first, key.second};
      auto px = multiply(tailx, w);
      auto py = multiply(taily, w);
      out[{px.word.x, px.word.z}] += coeff * 0.5 * px.phase;
      out[{py.word.x, py.word.z}] += coeff * cy * py.phase;
    }
    cur = std::move(out);
  }
  for (const auto& [key, coeff] : cur) acc[key] += coeff;
}

}  // namespace detail

// Maps a Hermitian combination of fermionic terms to a real PauliSum.
inline PauliSum jordan_wigner(std::span<const FermionTerm> terms, int n_modes) {
  detail::ComplexWordMap acc;
  for (const auto& t : terms) detail::jw_accumulate(acc, t, n_modes);
  PauliSum out(n_modes);
  for (const auto& [key, coeff] : acc) {
    if (std::abs(coeff.imag()) > 1e-10)
      throw std::invalid_argument("fermionic combination is not Hermitian under JW");
    out.add(coeff.real(), PauliWord{n_modes, key.first, key.second});
  }
  out.normalize();
  return out;
}

inline PauliSum jordan_wigner(const FermionTerm& term, int n_modes) {
  return jordan_wigner(std::span<const FermionTerm>(&term, 1), n_modes);
}

}  // namespace qre
