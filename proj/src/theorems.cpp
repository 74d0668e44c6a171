#include "mersenne/theorems.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mersenne/cache.hpp"
#include "mersenne/structure.hpp"

namespace mersenne_omega {

namespace {

struct IndexFactors {
  std::vector<MersenneIndex> primes;
  std::vector<std::uint64_t> exponents;
  std::uint64_t big_omega = 0;
};

IndexFactors factor_index(MersenneIndex n) {
  IndexFactors out;
  for (const auto& pp : factor_natural(static_cast<std::uint64_t>(n)).factors) {
    out.primes.push_back(pp.prime.get_ui());
    out.exponents.push_back(pp.exponent);
    out.big_omega += pp.exponent;
  }
  return out;
}

std::string subscript(MersenneIndex m) {
  static constexpr const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  std::string out;
  for (char c : std::to_string(m)) out += digits[c - '0'];
  return out;
}

std::string power_term(const std::string& base, std::uint64_t exponent) {
  return exponent > 1 ? base + "^" + std::to_string(exponent) : base;
}

// Renders f with the listed Mersenne primes M_m labelled, in the given order,
// followed by the remaining primes ascending.
std::string render(const Factorization& f, const std::vector<MersenneIndex>& labelled) {
  std::vector<std::string> terms;
  std::vector<Natural> used;
  for (MersenneIndex m : labelled) {
    const Natural mp = mersenne(m);
    const std::uint64_t e = f.exponent_of(mp);
    if (e == 0) continue;
    terms.push_back(power_term("M" + subscript(m), e));
    used.push_back(mp);
  }
  for (const auto& pp : f.factors) {
    if (std::find(used.begin(), used.end(), pp.prime) != used.end()) continue;
    terms.push_back(power_term(to_decimal(pp.prime), pp.exponent));
  }
  if (terms.empty()) return "1";
  std::string out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) out += "·" + terms[i];
  return out;
}

std::uint64_t exponent_gcd(const Factorization& f) {
  std::uint64_t g = 0;
  for (const auto& pp : f.factors) g = std::gcd(g, pp.exponent);
  return g;
}

bool mersenne_is_prime(MersenneIndex m) { return is_prime_like(is_probable_prime(mersenne(m))); }

class Checker {
 public:
  explicit Checker(ClassificationReport& report) : report_(report) {}

  void require(bool condition, std::string problem) {
    if (!condition) report_.problems.push_back(std::move(problem));
  }

  // M_m must be prime and occur in f; returns its exponent (0 if absent).
  std::uint64_t mersenne_prime_factor(MersenneIndex m) {
    const std::string label = "M_" + std::to_string(m);
    require(mersenne_is_prime(m), label + " is not prime");
    const std::uint64_t e = report_.factorization.exponent_of(mersenne(m));
    require(e > 0, label + " does not occur in the factorization");
    return e;
  }

 private:
  ClassificationReport& report_;
};

void check_omega_one(ClassificationReport& r, Checker& c) {
  const auto& f = r.factorization;
  r.matched_clause = Clause::T1;
  c.require(r.form.shape == IndexShape::two || r.form.shape == IndexShape::prime,
            "omega = 1 requires a prime index");
  c.require(f.factors.front().exponent == 1, "M_n is a perfect power");
  r.decomposition = render(f, {});
}

void check_omega_two(ClassificationReport& r, Checker& c) {
  const auto& f = r.factorization;
  const MersenneIndex n = r.n;
  switch (r.form.shape) {
    case IndexShape::special4:
      r.matched_clause = Clause::T2_special;
      c.require(c.mersenne_prime_factor(2) == 1, "M_2 must divide M_4 exactly once");
      r.decomposition = render(f, {2});
      return;
    case IndexShape::special6:
      r.matched_clause = Clause::T2_special;
      c.mersenne_prime_factor(2);
      c.mersenne_prime_factor(3);
      r.decomposition = render(f, {2, 3});
      return;
    case IndexShape::prime_squared: {
      r.matched_clause = Clause::T2_i;
      const MersenneIndex p1 = r.form.index_primes.front();
      c.require(c.mersenne_prime_factor(p1) == 1, "M_p1 must occur exactly once");
      r.decomposition = render(f, {p1});
      return;
    }
    case IndexShape::prime:
      r.matched_clause = Clause::T2_ii;
      c.require(exponent_gcd(f) == 1, "gcd(s, t) != 1");
      r.decomposition = render(f, {});
      return;
    default:
      r.matched_clause = Clause::none;
      c.require(false, "omega = 2 but n = " + std::to_string(n) + " is not 4, 6, p or p^2");
      r.decomposition = render(f, {});
  }
}

void check_omega_three(ClassificationReport& r, Checker& c) {
  const auto& f = r.factorization;
  const MersenneIndex n = r.n;
  const auto& ps = r.form.index_primes;
  switch (r.form.shape) {
    case IndexShape::special8:
      r.matched_clause = Clause::T3_special;
      c.require(c.mersenne_prime_factor(2) == 1, "M_2 must divide M_8 exactly once");
      r.decomposition = render(f, {2});
      return;
    case IndexShape::two_times_prime: {
      r.matched_clause = Clause::T3_i;
      const MersenneIndex p1 = n / 2;
      const std::uint64_t e3 = c.mersenne_prime_factor(2);
      if (p1 != 3) c.require(e3 == 1, "3 must occur exactly once when p1 != 3");
      c.require(c.mersenne_prime_factor(p1) == 1, "M_p1 must occur exactly once");
      r.decomposition = render(f, {2, p1});
      return;
    }
    case IndexShape::two_distinct_primes: {
      r.matched_clause = Clause::T3_ii;
      const MersenneIndex p1 = ps[0];
      const MersenneIndex p2 = ps[1];
      const std::uint64_t s = c.mersenne_prime_factor(p1);
      const std::uint64_t t = c.mersenne_prime_factor(p2);
      c.require(exponent_gcd(f) == 1, "gcd of exponents != 1");
      c.require(t == 1, "M_p2 must occur exactly once");
      const Natural p2_value = static_cast<unsigned long>(p2);
      if (!mpz_divisible_p(p2_value.get_mpz_t(), mersenne(p1).get_mpz_t()))
        c.require(s == 1, "M_p1 must occur exactly once when M_p1 does not divide p2");
      r.decomposition = render(f, {p1, p2});
      return;
    }
    case IndexShape::prime_squared: {
      r.matched_clause = Clause::T3_iii;
      const MersenneIndex p1 = ps[0];
      const Factorization inner = factor_out(mersenne(p1), f.primes());
      c.require(inner.complete(), "M_p1 is not covered by the primes of M_n");
      c.require(inner.omega() == 1 || inner.omega() == 2, "omega(M_p1) must be 1 or 2");
      for (const auto& pp : inner.factors)
        c.require(f.exponent_of(pp.prime) == pp.exponent,
                  "exponent of " + to_decimal(pp.prime) + " differs between M_p1 and M_n");
      r.decomposition = render(f, inner.omega() == 1 ? std::vector<MersenneIndex>{p1} : std::vector<MersenneIndex>{});
      return;
    }
    case IndexShape::prime_cubed: {
      r.matched_clause = Clause::T3_iv;
      const MersenneIndex p1 = ps[0];
      c.require(c.mersenne_prime_factor(p1) == 1, "M_p1 must occur exactly once");
      std::uint64_t g = 0;
      for (const auto& pp : f.factors)
        if (pp.prime != mersenne(p1)) g = std::gcd(g, pp.exponent);
      c.require(g == 1, "gcd(t, r) != 1");
      r.decomposition = render(f, {p1});
      return;
    }
    case IndexShape::prime:
      r.matched_clause = Clause::T3_v;
      c.require(exponent_gcd(f) == 1, "gcd(s, t, r) != 1");
      r.decomposition = render(f, {});
      return;
    default:
      r.matched_clause = Clause::none;
      c.require(false, "omega = 3 but n = " + std::to_string(n) + " has none of the admissible shapes");
      r.decomposition = render(f, {});
  }
}

template <typename Fn>
void record(SubSuite& suite, bool ok, Fn describe) {
  if (ok) {
    ++suite.passed;
    return;
  }
  ++suite.failed;
  if (!suite.first_counterexample) suite.first_counterexample = describe();
}

void record_inconclusive(SubSuite& suite, std::string what) {
  ++suite.inconclusive;
  if (!suite.first_inconclusive) suite.first_inconclusive = std::move(what);
}

SubSuite gcd_suite(MersenneIndex max_n) {
  SubSuite suite;
  suite.name = "gcd_identity";
  for (MersenneIndex a = 1; a <= max_n; ++a) {
    const Natural ma = mersenne(a);
    for (MersenneIndex b = 1; b <= max_n; ++b) {
      Natural g;
      const Natural mb = mersenne(b);
      mpz_gcd(g.get_mpz_t(), ma.get_mpz_t(), mb.get_mpz_t());
      const MersenneIndex d = std::gcd(a, b);
      record(suite, g == mersenne(d), [&] {
        return "gcd(M_" + std::to_string(a) + ", M_" + std::to_string(b) + ") != M_" + std::to_string(d);
      });
    }
  }
  return suite;
}

SubSuite proposition1_suite(MersenneIndex max_n, const Budget& budget, FactorCache* cache,
                            FactorStats* stats) {
  SubSuite suite;
  suite.name = "proposition_1";
  for (MersenneIndex m = 2; m * m < max_n; ++m) {
    for (MersenneIndex n = m + 1; m * n <= max_n; ++n) {
      if (std::gcd(m, n) != 1) continue;
      if (m * n == 6) {
        ++suite.skipped;
        continue;
      }
      const auto fm = factor_mersenne(m, budget, cache, stats);
      const auto fn = factor_mersenne(n, budget, cache, stats);
      const auto fmn = factor_mersenne(m * n, budget, cache, stats);
      const std::string label = "(m, n) = (" + std::to_string(m) + ", " + std::to_string(n) + ")";
      if (!fm.complete() || !fn.complete() || !fmn.complete()) {
        record_inconclusive(suite, label + ": incomplete factorization");
        continue;
      }
      record(suite, fmn.omega() > fm.omega() + fn.omega(), [&] {
        return label + ": omega(M_mn) = " + std::to_string(fmn.omega()) + " <= " +
               std::to_string(fm.omega() + fn.omega());
      });
    }
  }
  return suite;
}

SubSuite perfect_power_suite(MersenneIndex max_n) {
  SubSuite suite;
  suite.name = "perfect_power_absence";
  for (MersenneIndex n = 2; n <= max_n; ++n) {
    const auto power = is_perfect_power(mersenne(n));
    record(suite, !power.has_value(), [&] {
      return "M_" + std::to_string(n) + " = " + to_decimal(power->base) + "^" + to_decimal(power->exponent);
    });
  }
  return suite;
}

SubSuite lemma4_suite(MersenneIndex max_n) {
  SubSuite suite;
  suite.name = "lemma4_residue";
  for (MersenneIndex p = 2; p <= max_n; ++p) {
    if (is_probable_prime(static_cast<std::uint64_t>(p)) != Verdict::prime) continue;
    for (MersenneIndex m = 1; p * m <= max_n; ++m) {
      const Natural closed = lemma4_residue(p, Natural(static_cast<unsigned long>(m)));
      const Natural direct = lemma4_residue_by_division(p, m);
      record(suite, closed == direct, [&] {
        return "p = " + std::to_string(p) + ", m = " + std::to_string(m) + ": closed form " +
               to_decimal(closed) + " != " + to_decimal(direct);
      });
    }
  }
  return suite;
}

SubSuite divisor_form_suite(MersenneIndex max_n, const Budget& budget, FactorCache* cache,
                            FactorStats* stats) {
  SubSuite suite;
  suite.name = "divisor_form";
  for (MersenneIndex p = 3; p <= max_n; p += 2) {
    if (is_probable_prime(static_cast<std::uint64_t>(p)) != Verdict::prime) continue;
    const auto f = factor_mersenne(p, budget, cache, stats);
    if (!f.complete()) record_inconclusive(suite, "M_" + std::to_string(p) + " not fully factored");
    for (const auto& pp : f.factors) {
      const auto check = validate_divisor_form(pp.prime, p);
      record(suite, check.passes, [&] {
        return to_decimal(pp.prime) + " | M_" + std::to_string(p) + " violates q = 2lp + 1, l = 0 or -p (mod 4)";
      });
    }
  }
  return suite;
}

SubSuite bounds_suite(MersenneIndex max_n, const Budget& budget, FactorCache* cache, FactorStats* stats) {
  SubSuite suite;
  suite.name = "omega_lower_bounds";
  for (MersenneIndex n = 2; n <= max_n; ++n) {
    const auto f = factor_mersenne(n, budget, cache, stats);
    if (!f.complete()) {
      record_inconclusive(suite, "M_" + std::to_string(n) + " not fully factored");
      continue;
    }
    const auto omega = static_cast<std::int64_t>(f.omega());
    const bool ok = omega >= static_cast<std::int64_t>(lower_bound_omega(n)) &&
                    omega >= static_cast<std::int64_t>(lower_bound_divisors(n)) &&
                    omega >= paper_divisor_bound(n);
    record(suite, ok, [&] { return "omega(M_" + std::to_string(n) + ") = " + std::to_string(omega) + " below a bound"; });
  }
  return suite;
}

SubSuite structure_suite(MersenneIndex max_n, const Budget& budget, FactorCache* cache, FactorStats* stats) {
  SubSuite suite;
  suite.name = "structure";
  for (MersenneIndex n = 2; n <= max_n; ++n) {
    const auto f = factor_mersenne(n, budget, cache, stats);
    if (!f.complete()) {
      record_inconclusive(suite, "M_" + std::to_string(n) + " not fully factored");
      continue;
    }
    const auto report = verify_structure(n, f);
    record(suite, report.consistent, [&] {
      return "n = " + std::to_string(n) + ": " + (report.problems.empty() ? "" : report.problems.front());
    });
  }
  return suite;
}

SubSuite mersenne_prime_suite(MersenneIndex max_n, const Budget& budget, FactorCache* cache,
                              FactorStats* stats) {
  SubSuite suite;
  suite.name = "lucas_lehmer_agreement";
  for (MersenneIndex p = 3; p <= max_n; p += 2) {
    if (is_probable_prime(static_cast<std::uint64_t>(p)) != Verdict::prime) continue;
    const auto f = factor_mersenne(p, budget, cache, stats);
    if (!f.complete()) {
      record_inconclusive(suite, "M_" + std::to_string(p) + " not fully factored");
      continue;
    }
    const bool ll = lucas_lehmer(p);
    record(suite, ll == (f.omega() == 1), [&] {
      return "p = " + std::to_string(p) + ": Lucas-Lehmer and factorization disagree";
    });
  }
  return suite;
}

}  // namespace

std::string_view to_string(IndexShape s) {
  switch (s) {
    case IndexShape::one: return "one";
    case IndexShape::two: return "two";
    case IndexShape::special4: return "special4";
    case IndexShape::special6: return "special6";
    case IndexShape::special8: return "special8";
    case IndexShape::prime: return "prime";
    case IndexShape::prime_squared: return "prime_squared";
    case IndexShape::prime_cubed: return "prime_cubed";
    case IndexShape::two_times_prime: return "two_times_prime";
    case IndexShape::two_distinct_primes: return "two_distinct_primes";
    case IndexShape::other: return "other";
  }
  return "other";
}

std::string_view to_string(OmegaClass c) {
  switch (c) {
    case OmegaClass::one: return "1";
    case OmegaClass::two: return "2";
    case OmegaClass::three: return "3";
    case OmegaClass::more: return "more";
  }
  return "more";
}

OmegaClass omega_class(std::uint64_t omega) {
  if (omega == 0) throw std::invalid_argument("omega_class: omega must be >= 1");
  return omega >= 4 ? OmegaClass::more : static_cast<OmegaClass>(omega);
}

std::string_view to_string(Clause c) {
  switch (c) {
    case Clause::T1: return "T1";
    case Clause::T2_i: return "T2_i";
    case Clause::T2_ii: return "T2_ii";
    case Clause::T2_special: return "T2_special";
    case Clause::T3_i: return "T3_i";
    case Clause::T3_ii: return "T3_ii";
    case Clause::T3_iii: return "T3_iii";
    case Clause::T3_iv: return "T3_iv";
    case Clause::T3_v: return "T3_v";
    case Clause::T3_special: return "T3_special";
    case Clause::none: return "none";
  }
  return "none";
}

bool CandidateForm::eligible(std::uint64_t omega) const {
  if (omega == 0) return false;
  return std::find(eligible_omega.begin(), eligible_omega.end(), omega_class(omega)) != eligible_omega.end();
}

DivisorFormCheck validate_divisor_form(const Natural& q, MersenneIndex p) {
  DivisorFormCheck check;
  check.q = q;
  check.p = p;
  const Natural step = Natural(static_cast<unsigned long>(p)) * 2;
  const Natural numerator = q - 1;
  if (q < 3 || !mpz_divisible_p(numerator.get_mpz_t(), step.get_mpz_t())) {
    check.form_integral = false;
    check.l = 0;
    check.passes = false;
    return check;
  }
  check.l = numerator / step;
  check.l_class = static_cast<unsigned>(mpz_fdiv_ui(check.l.get_mpz_t(), 4));
  const unsigned minus_p = static_cast<unsigned>((4 - p % 4) % 4);
  check.passes = check.l_class == 0 || check.l_class == minus_p;
  return check;
}

std::uint64_t lower_bound_omega(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("lower_bound_omega: n must be >= 1");
  if (n == 1) return 0;
  if (n == 2) return 1;
  if (n == 6) return 2;
  const auto f = factor_index(n);
  return f.primes.size() == 1 ? f.big_omega : f.big_omega + 1;
}

std::uint64_t literal_prop2_bound(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("literal_prop2_bound: n must be >= 1");
  if (n == 2 || n == 6) return lower_bound_omega(n);
  return factor_index(n).big_omega + 1;
}

std::uint64_t lower_bound_divisors(MersenneIndex n) {
  const auto divisors = divisor_list(n);
  return static_cast<std::uint64_t>(
      std::count_if(divisors.begin(), divisors.end(), [](MersenneIndex h) { return h != 1 && h != 6; }));
}

std::int64_t paper_divisor_bound(MersenneIndex n) {
  return static_cast<std::int64_t>(divisor_list(n).size()) - 3;
}

CandidateForm classify_index(MersenneIndex n) {
  if (n == 0) throw std::invalid_argument("classify_index: n must be >= 1");
  CandidateForm form;
  form.n = n;
  const auto f = factor_index(n);
  form.index_primes = f.primes;
  form.min_omega = std::max(lower_bound_omega(n), lower_bound_divisors(n));

  using enum OmegaClass;
  std::vector<OmegaClass> admissible;
  switch (n) {
    case 1: form.shape = IndexShape::one; break;
    case 2: form.shape = IndexShape::two; admissible = {one}; break;
    case 4: form.shape = IndexShape::special4; admissible = {two}; break;
    case 6: form.shape = IndexShape::special6; admissible = {two}; break;
    case 8: form.shape = IndexShape::special8; admissible = {three}; break;
    default:
      if (f.primes.size() == 1 && f.primes[0] != 2 && f.exponents[0] <= 3) {
        switch (f.exponents[0]) {
          case 1: form.shape = IndexShape::prime; admissible = {one, two, three, more}; break;
          case 2: form.shape = IndexShape::prime_squared; admissible = {two, three, more}; break;
          default: form.shape = IndexShape::prime_cubed; admissible = {three, more}; break;
        }
      } else if (f.primes.size() == 2 && f.big_omega == 2) {
        form.shape = f.primes[0] == 2 ? IndexShape::two_times_prime : IndexShape::two_distinct_primes;
        admissible = {three, more};
      } else {
        form.shape = IndexShape::other;
        admissible = {more};
      }
  }
  for (OmegaClass c : admissible)
    if (c == more || static_cast<std::uint64_t>(c) >= form.min_omega) form.eligible_omega.push_back(c);
  return form;
}

ClassificationReport verify_structure(MersenneIndex n, const Factorization& f) {
  if (n == 0) throw std::invalid_argument("verify_structure: n must be >= 1");
  if (!f.complete())
    throw std::invalid_argument("verify_structure: factorization of M_" + std::to_string(n) + " is partial");
  if (f.target != mersenne(n))
    throw std::invalid_argument("verify_structure: factorization target is not M_" + std::to_string(n));

  ClassificationReport r;
  r.n = n;
  r.omega = f.omega();
  r.form = classify_index(n);
  r.factorization = f;
  Checker c(r);

  if (r.form.shape == IndexShape::prime) {
    for (const auto& pp : f.factors) {
      r.divisor_form_checks.push_back(validate_divisor_form(pp.prime, n));
      c.require(r.divisor_form_checks.back().passes,
                to_decimal(pp.prime) + " does not have the form 2lp + 1 with l = 0 or -p (mod 4)");
    }
  }

  if (r.omega == 0) {
    r.matched_clause = Clause::none;
    r.decomposition = "1";
    c.require(n == 1, "omega(M_n) = 0 requires n = 1");
  } else {
    c.require(r.omega >= r.form.min_omega, "omega(M_n) = " + std::to_string(r.omega) +
                                               " is below the lower bound " + std::to_string(r.form.min_omega));
    c.require(r.form.eligible(r.omega), "omega(M_n) = " + std::to_string(r.omega) + " is not admissible for shape " +
                                            std::string(to_string(r.form.shape)));
    switch (r.omega) {
      case 1: check_omega_one(r, c); break;
      case 2: check_omega_two(r, c); break;
      case 3: check_omega_three(r, c); break;
      default:
        r.matched_clause = Clause::none;
        r.decomposition = render(f, {});
    }
  }
  r.consistent = r.problems.empty();
  return r;
}

std::uint64_t SuiteReport::failures() const {
  std::uint64_t total = 0;
  for (const auto& s : suites) total += s.failed;
  return total;
}

std::uint64_t SuiteReport::inconclusive() const {
  std::uint64_t total = 0;
  for (const auto& s : suites) total += s.inconclusive;
  return total;
}

SuiteReport verify_identities(MersenneIndex max_n, const Budget& budget, FactorCache* cache, FactorStats* stats) {
  if (max_n < 2) throw std::invalid_argument("verify_identities: max_n must be >= 2");
  SuiteReport report;
  report.max_n = max_n;
  report.suites.push_back(gcd_suite(max_n));
  report.suites.push_back(proposition1_suite(max_n, budget, cache, stats));
  report.suites.push_back(perfect_power_suite(max_n));
  report.suites.push_back(lemma4_suite(max_n));
  return report;
}

SuiteReport verify_range(MersenneIndex max_n, const Budget& budget, FactorCache* cache, FactorStats* stats) {
  if (max_n < 2) throw std::invalid_argument("verify_range: max_n must be >= 2");
  SuiteReport report;
  report.max_n = max_n;
  report.suites.push_back(gcd_suite(max_n));
  report.suites.push_back(proposition1_suite(max_n, budget, cache, stats));
  report.suites.push_back(perfect_power_suite(std::max(max_n, kPerfectPowerSweepMin)));
  report.suites.push_back(lemma4_suite(max_n));
  report.suites.push_back(divisor_form_suite(max_n, budget, cache, stats));
  report.suites.push_back(mersenne_prime_suite(max_n, budget, cache, stats));
  report.suites.push_back(bounds_suite(max_n, budget, cache, stats));
  report.suites.push_back(structure_suite(max_n, budget, cache, stats));
  return report;
}

}  // namespace mersenne_omega
