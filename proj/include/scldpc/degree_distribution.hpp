#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scldpc {

// Node-perspective degree distribution pair (L, R) of an LDPC ensemble.
// Sparse representation: sorted (degree, coefficient) lists. Edge-perspective
// polynomials lambda = L'/L'(1) and rho = R'/R'(1) and their derivatives are
// derived on the fly.
//
// The complement forms rho_complement(x) = 1 - rho(1-x) and
// R_complement(x) = 1 - R(1-x) are evaluated through expm1/log1p so that they
// are exactly 0 at x = 0. Several downstream quantities (the potential at the
// origin, fixed-point residuals) rely on that exactness.
class DegreeDistribution {
 public:
  using Terms = std::vector<std::pair<int, double>>;

  DegreeDistribution(Terms L, Terms R) : L_(normalize(std::move(L), "L")), R_(normalize(std::move(R), "R")) {
    Lp1_ = moment1(L_);
    Rp1_ = moment1(R_);
    if (Lp1_ <= 0 || Rp1_ <= 0) throw std::invalid_argument("degree distribution: empty polynomial");
  }

  // Parses polynomial text such as "x^3", "0.95 x^3 + 0.05 x^23" or
  // "153/283 x^2 + 102/283 x^3 + 28/283 x^51". '*' between coefficient and x
  // and the '^' are both optional.
  static DegreeDistribution parse(const std::string& L_text, const std::string& R_text) {
    return DegreeDistribution(parse_poly(L_text), parse_poly(R_text));
  }

  const Terms& L_terms() const { return L_; }
  const Terms& R_terms() const { return R_; }
  double L_prime_one() const { return Lp1_; }
  double R_prime_one() const { return Rp1_; }
  double design_rate() const { return 1.0 - Lp1_ / Rp1_; }
  int max_L_degree() const { return L_.back().first; }
  int max_R_degree() const { return R_.back().first; }

  // All evaluations take x in [0,1]; up to 1e-12 of overshoot (golden-section
  // probes, cumulative-sum rounding) is clamped, anything further is a bug in
  // the caller.
  double L(double x) const { return eval(L_, domain01(x)); }
  double R(double x) const { return eval(R_, domain01(x)); }
  double L_prime(double x) const { return eval_d1(L_, domain01(x)); }
  double R_prime(double x) const { return eval_d1(R_, domain01(x)); }

  double lam(double x) const { return eval_d1(L_, domain01(x)) / Lp1_; }
  double rho(double x) const { return eval_d1(R_, domain01(x)) / Rp1_; }
  double lam_prime(double x) const { return eval_d2(L_, domain01(x)) / Lp1_; }
  double rho_prime(double x) const { return eval_d2(R_, domain01(x)) / Rp1_; }
  double rho_second(double x) const { return eval_d3(R_, domain01(x)) / Rp1_; }

  // 1 - rho(1 - x), exact 0 at x = 0 and exact 1 at x = 1.
  double rho_complement(double x) const {
    x = domain01(x);
    if (x >= 1.0) return 1.0;
    const double l = std::log1p(-x);
    double acc = 0.0;
    for (const auto& [d, c] : R_) acc += d * c * (-std::expm1((d - 1) * l));
    return acc / Rp1_;
  }

  // 1 - R(1 - x), exact 0 at x = 0.
  double R_complement(double x) const {
    x = domain01(x);
    if (x >= 1.0) return 1.0;
    const double l = std::log1p(-x);
    double acc = 0.0;
    for (const auto& [d, c] : R_) acc += c * (-std::expm1(d * l));
    return acc;
  }

  // Stable text label used in CSV output, e.g. "x^3:x^6" or
  // "0.95x^3+0.05x^23:x^8".
  std::string id() const { return poly_id(L_) + ":" + poly_id(R_); }

  bool operator==(const DegreeDistribution& o) const { return L_ == o.L_ && R_ == o.R_; }

 private:
  Terms L_, R_;
  double Lp1_ = 0, Rp1_ = 0;

  static double domain01(double x) {
    if (x < -1e-12 || x > 1.0 + 1e-12) throw std::domain_error("polynomial argument outside [0,1]: " + std::to_string(x));
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  }

  static double eval(const Terms& p, double x) {
    double acc = 0.0;
    for (const auto& [d, c] : p) acc += c * std::pow(x, d);
    return acc;
  }
  static double eval_d1(const Terms& p, double x) {
    double acc = 0.0;
    for (const auto& [d, c] : p) acc += d * c * std::pow(x, d - 1);
    return acc;
  }
  static double eval_d2(const Terms& p, double x) {
    double acc = 0.0;
    for (const auto& [d, c] : p)
      if (d >= 2) acc += double(d) * (d - 1) * c * std::pow(x, d - 2);
    return acc;
  }
  static double eval_d3(const Terms& p, double x) {
    double acc = 0.0;
    for (const auto& [d, c] : p)
      if (d >= 3) acc += double(d) * (d - 1) * (d - 2) * c * std::pow(x, d - 3);
    return acc;
  }
  static double moment1(const Terms& p) {
    double acc = 0.0;
    for (const auto& [d, c] : p) acc += d * c;
    return acc;
  }

  static Terms normalize(Terms t, const char* side) {
    if (t.empty()) throw std::invalid_argument(std::string(side) + ": no terms");
    std::map<int, double> merged;
    for (const auto& [d, c] : t) {
      if (d < 2) throw std::invalid_argument(std::string(side) + ": minimum degree is 2");
      if (c < 0) throw std::invalid_argument(std::string(side) + ": negative coefficient");
      if (c > 0) merged[d] += c;
    }
    if (merged.empty()) throw std::invalid_argument(std::string(side) + ": all coefficients zero");
    double sum = 0.0;
    for (const auto& [d, c] : merged) sum += c;
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument(std::string(side) + ": coefficients sum to " + std::to_string(sum) + ", not 1");
    Terms out;
    for (const auto& [d, c] : merged) out.emplace_back(d, c / sum);
    return out;
  }

  static double parse_number(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  }

  static Terms parse_poly(const std::string& text) {
    Terms out;
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    size_t i = 0;
    while (i < s.size()) {
      if (s[i] == '+') ++i;
      double coeff = 1.0;
      if (i < s.size() && s[i] == '(') {
        // parenthesized coefficient, e.g. (19/20)x^3
        const size_t close = s.find(')', i);
        if (close == std::string::npos)
          throw std::invalid_argument("polynomial parse error: unbalanced '(' in \"" + text + "\"");
        coeff = parse_number(s.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' || s[j] == '/' ||
                                s[j] == 'e' || s[j] == 'E' || (s[j] == '-' && j > i && (s[j - 1] == 'e' || s[j - 1] == 'E'))))
          ++j;
        if (j > i) coeff = parse_number(s.substr(i, j - i));
        i = j;
      }
      if (i < s.size() && s[i] == '*') ++i;
      if (i >= s.size() || s[i] != 'x')
        throw std::invalid_argument("polynomial parse error near '" + s.substr(i) + "' in \"" + text + "\"");
      ++i;
      if (i < s.size() && s[i] == '^') ++i;
      j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) throw std::invalid_argument("polynomial parse error: missing exponent in \"" + text + "\"");
      int deg = std::stoi(s.substr(i, j - i));
      out.emplace_back(deg, coeff);
      i = j;
    }
    return out;
  }

  static std::string trim_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }
  static std::string poly_id(const Terms& p) {
    std::string out;
    for (const auto& [d, c] : p) {
      if (!out.empty()) out += "+";
      if (std::abs(c - 1.0) > 1e-12) out += trim_number(c);
      out += "x^" + std::to_string(d);
    }
    return out;
  }
};

}  // namespace scldpc
