#pragma once

// Mamdani fuzzy inference: membership functions, linguistic variables,
// rule base, min/max inference and centroid defuzzification.

#include <lteu/common.hpp>

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lteu::fuzzy {

/**
 * Piecewise-linear membership function. A triangle (a,b,c) is stored as
 * the trapezoid (a,b,b,c). Shoulders are expressed with a == b or c == d.
 */
class MembershipFunction
{
public:
  enum class Shape { triangular, trapezoidal };

  static MembershipFunction triangle(double a, double b, double c);
  static MembershipFunction trapezoid(double a, double b, double c, double d);

  /// Degree of membership in [0,1]; 0 outside [a,d], 1 on [b,c].
  double operator()(double x) const;

  Shape shape() const { return shape_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  /// `tri(a,b,c)` or `trap(a,b,c,d)`, round-trippable through parse().
  std::string render() const;
  static MembershipFunction parse(std::string_view text);

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

private:
  MembershipFunction(Shape shape, double a, double b, double c, double d);

  Shape shape_;
  double a_, b_, c_, d_;
};

using Degrees = std::map<std::string, double, std::less<>>;

class LinguisticVariable
{
public:
  LinguisticVariable(std::string name,
                     double min,
                     double max,
                     std::string units,
                     std::vector<std::pair<std::string, MembershipFunction>> terms);

  const std::string& name() const { return name_; }
  double min() const { return min_; }
  double max() const { return max_; }
  const std::string& units() const { return units_; }
  const std::vector<std::pair<std::string, MembershipFunction>>& terms() const { return terms_; }

  bool has_term(std::string_view term) const;
  const MembershipFunction& term(std::string_view term) const;

  /// Replaces an existing term or appends a new one, revalidating the variable.
  void set_term(const std::string& term, const MembershipFunction& mf);

  double clamp(double x) const;

  /// One degree per term, evaluated at x clamped to the universe.
  Degrees fuzzify(double x) const;

  friend bool operator==(const LinguisticVariable&, const LinguisticVariable&) = default;

private:
  void validate() const;

  std::string name_;
  double min_;
  double max_;
  std::string units_;
  std::vector<std::pair<std::string, MembershipFunction>> terms_;
};

enum class Connective { and_, or_ };

struct Clause
{
  std::string variable;
  std::string term;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// `connectives[i]` joins `antecedent[i]` and `antecedent[i + 1]`.
struct FuzzyRule
{
  std::vector<Clause> antecedent;
  std::vector<Connective> connectives;
  Clause consequent;

  friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

/// Vocabulary against which rules are parsed and checked.
struct Vocabulary
{
  std::span<const LinguisticVariable> inputs;
  const LinguisticVariable* output = nullptr;
};

/**
 * Parses the rule DSL. One rule per statement:
 *
 *   if (<var> is <term>) [(and|or) (<var> is <term>)]* then (<outvar> is <term>)
 *
 * Keywords are case-insensitive; identifiers are matched exactly and may
 * contain any non-blank characters, including balanced parentheses. A
 * statement may be followed by a numeric label such as `(1)` and by `;`.
 * `#` starts a comment running to end of line. Mixed and/or connectives are
 * applied left to right without precedence.
 */
std::vector<FuzzyRule> parse_rule_base(std::string_view text, const Vocabulary& vocabulary);

/// One rule per line, in the same grammar parse_rule_base accepts.
std::string render_rules(std::span<const FuzzyRule> rules);

using InputDegrees = std::map<std::string, Degrees, std::less<>>;

/// Left-to-right min (and) / max (or) over the antecedent clauses.
double evaluate_rule(const FuzzyRule& rule, const InputDegrees& degrees);

/// Sampled output fuzzy set plus its centroid.
struct InferenceResult
{
  std::vector<double> aggregated;
  double crisp = 0.0;
};

/// Thrown by infer() when every rule activation is zero.
class NoRuleFired : public Error
{
public:
  NoRuleFired() : Error("no rule fired") {}
};

/// Σ xᵢ·μᵢ / Σ μᵢ over `samples.size()` uniform points spanning [lo, hi].
double defuzzify_centroid(std::span<const double> samples, double lo, double hi);

class RuleBase
{
public:
  static constexpr int kDefaultResolution = 1001;

  RuleBase(std::vector<LinguisticVariable> inputs,
           LinguisticVariable output,
           std::vector<FuzzyRule> rules,
           int resolution = kDefaultResolution);

  /// Builds a rule base whose rules are parsed from DSL text.
  static RuleBase from_text(std::vector<LinguisticVariable> inputs,
                            LinguisticVariable output,
                            std::string_view rule_text,
                            int resolution = kDefaultResolution);

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const LinguisticVariable& output() const { return output_; }
  const std::vector<FuzzyRule>& rules() const { return rules_; }
  int resolution() const { return resolution_; }

  const LinguisticVariable& input(std::string_view name) const;

  RuleBase with_resolution(int resolution) const;

  /// Mamdani inference; every input variable must be present in `crisp_inputs`.
  InferenceResult infer(const std::map<std::string, double, std::less<>>& crisp_inputs) const;

  /// Clip level of each output term after max-aggregation over the rules.
  std::map<std::string, double, std::less<>>
  term_activations(const std::map<std::string, double, std::less<>>& crisp_inputs) const;

private:
  void check_rule(const FuzzyRule& rule) const;

  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<FuzzyRule> rules_;
  int resolution_;
};

struct HandoffAdvice
{
  double value = 0.0;
  bool recommend = false;
};

} // namespace lteu::fuzzy
