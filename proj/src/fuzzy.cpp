#include <lteu/fuzzy.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace lteu::fuzzy {

namespace {

std::string
format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

MembershipFunction::MembershipFunction(Shape shape, double a, double b, double c, double d)
  : shape_(shape), a_(a), b_(b), c_(c), d_(d)
{
  if (!(a <= b && b <= c && c <= d))
    {
      throw Error("membership breakpoints must be nondecreasing: " + render());
    }
}

MembershipFunction
MembershipFunction::triangle(double a, double b, double c)
{
  return MembershipFunction(Shape::triangular, a, b, b, c);
}

MembershipFunction
MembershipFunction::trapezoid(double a, double b, double c, double d)
{
  return MembershipFunction(Shape::trapezoidal, a, b, c, d);
}

double
MembershipFunction::operator()(double x) const
{
  if (x < a_ || x > d_)
    {
      return 0.0;
    }
  if (x < b_)
    {
      return (x - a_) / (b_ - a_);
    }
  if (x <= c_)
    {
      return 1.0;
    }
  return (d_ - x) / (d_ - c_);
}

std::string
MembershipFunction::render() const
{
  if (shape_ == Shape::triangular)
    {
      return "tri(" + format_number(a_) + "," + format_number(b_) + "," + format_number(d_) + ")";
    }
  return "trap(" + format_number(a_) + "," + format_number(b_) + "," + format_number(c_) + ","
         + format_number(d_) + ")";
}

MembershipFunction
MembershipFunction::parse(std::string_view text)
{
  std::string s;
  for (char ch : text)
    {
      if (ch != ' ' && ch != '\t')
        {
          s.push_back(ch);
        }
    }
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    {
      throw ParseError("expected tri(a,b,c) or trap(a,b,c,d), got '" + std::string(text) + "'");
    }
  std::string kind = s.substr(0, open);
  std::vector<double> args;
  std::stringstream body(s.substr(open + 1, s.size() - open - 2));
  std::string item;
  while (std::getline(body, item, ','))
    {
      try
        {
          std::size_t used = 0;
          args.push_back(std::stod(item, &used));
          if (used != item.size())
            {
              throw std::invalid_argument(item);
            }
        }
      catch (const std::logic_error&)
        {
          throw ParseError("bad membership breakpoint '" + item + "'");
        }
    }
  if (kind == "tri" && args.size() == 3)
    {
      return triangle(args[0], args[1], args[2]);
    }
  if (kind == "trap" && args.size() == 4)
    {
      return trapezoid(args[0], args[1], args[2], args[3]);
    }
  throw ParseError("expected tri(a,b,c) or trap(a,b,c,d), got '" + std::string(text) + "'");
}

LinguisticVariable::LinguisticVariable(std::string name,
                                       double min,
                                       double max,
                                       std::string units,
                                       std::vector<std::pair<std::string, MembershipFunction>> terms)
  : name_(std::move(name)), min_(min), max_(max), units_(std::move(units)), terms_(std::move(terms))
{
  validate();
}

void
LinguisticVariable::validate() const
{
  if (!(min_ < max_))
    {
      throw Error("variable '" + name_ + "' has an empty universe");
    }
  if (terms_.empty())
    {
      throw Error("variable '" + name_ + "' has no terms");
    }
  for (std::size_t i = 0; i < terms_.size(); ++i)
    {
      const auto& [term, mf] = terms_[i];
      if (mf.a() < min_ || mf.d() > max_)
        {
          throw Error("term '" + term + "' of '" + name_ + "' extends outside the universe");
        }
      for (std::size_t j = 0; j < i; ++j)
        {
          if (terms_[j].first == term)
            {
              throw Error("duplicate term '" + term + "' in variable '" + name_ + "'");
            }
        }
    }
}

bool
LinguisticVariable::has_term(std::string_view term) const
{
  return std::any_of(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first == term; });
}

const MembershipFunction&
LinguisticVariable::term(std::string_view term) const
{
  for (const auto& [name, mf] : terms_)
    {
      if (name == term)
        {
          return mf;
        }
    }
  throw Error("variable '" + name_ + "' has no term '" + std::string(term) + "'");
}

void
LinguisticVariable::set_term(const std::string& term, const MembershipFunction& mf)
{
  auto saved = terms_;
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first == term; });
  if (it != terms_.end())
    {
      it->second = mf;
    }
  else
    {
      terms_.emplace_back(term, mf);
    }
  try
    {
      validate();
    }
  catch (...)
    {
      terms_ = std::move(saved);
      throw;
    }
}

double
LinguisticVariable::clamp(double x) const
{
  return std::clamp(x, min_, max_);
}

Degrees
LinguisticVariable::fuzzify(double x) const
{
  const double v = clamp(x);
  Degrees out;
  for (const auto& [name, mf] : terms_)
    {
      out.emplace(name, mf(v));
    }
  return out;
}

double
evaluate_rule(const FuzzyRule& rule, const InputDegrees& degrees)
{
  auto degree_of = [&](const Clause& clause) {
    auto var = degrees.find(clause.variable);
    if (var == degrees.end())
      {
        throw Error("no degrees supplied for variable '" + clause.variable + "'");
      }
    auto term = var->second.find(clause.term);
    if (term == var->second.end())
      {
        throw Error("no degree for term '" + clause.term + "' of '" + clause.variable + "'");
      }
    return term->second;
  };

  if (rule.antecedent.empty())
    {
      throw Error("rule has an empty antecedent");
    }
  double acc = degree_of(rule.antecedent.front());
  for (std::size_t i = 1; i < rule.antecedent.size(); ++i)
    {
      const double d = degree_of(rule.antecedent[i]);
      acc = rule.connectives.at(i - 1) == Connective::and_ ? std::min(acc, d) : std::max(acc, d);
    }
  return acc;
}

double
defuzzify_centroid(std::span<const double> samples, double lo, double hi)
{
  if (samples.size() < 2)
    {
      throw Error("centroid needs at least two samples");
    }
  const double step = (hi - lo) / static_cast<double>(samples.size() - 1);
  double moment = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    {
      const double x = lo + step * static_cast<double>(i);
      moment += x * samples[i];
      mass += samples[i];
    }
  if (mass <= 0.0)
    {
      throw Error("centroid of an empty fuzzy set");
    }
  return std::clamp(moment / mass, lo, hi);
}

RuleBase::RuleBase(std::vector<LinguisticVariable> inputs,
                   LinguisticVariable output,
                   std::vector<FuzzyRule> rules,
                   int resolution)
  : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)), resolution_(resolution)
{
  if (resolution_ < 3)
    {
      throw Error("rule base resolution must be at least 3");
    }
  for (std::size_t i = 0; i < inputs_.size(); ++i)
    {
      for (std::size_t j = 0; j < i; ++j)
        {
          if (inputs_[i].name() == inputs_[j].name())
            {
              throw Error("duplicate input variable '" + inputs_[i].name() + "'");
            }
        }
    }
  for (const auto& rule : rules_)
    {
      check_rule(rule);
    }
}

RuleBase
RuleBase::from_text(std::vector<LinguisticVariable> inputs,
                    LinguisticVariable output,
                    std::string_view rule_text,
                    int resolution)
{
  auto rules = parse_rule_base(rule_text, Vocabulary{inputs, &output});
  return RuleBase(std::move(inputs), std::move(output), std::move(rules), resolution);
}

void
RuleBase::check_rule(const FuzzyRule& rule) const
{
  if (rule.antecedent.empty() || rule.connectives.size() + 1 != rule.antecedent.size())
    {
      throw Error("malformed rule: connective count does not match clause count");
    }
  for (const auto& clause : rule.antecedent)
    {
      if (!input(clause.variable).has_term(clause.term))
        {
          throw Error("unknown term '" + clause.term + "' for '" + clause.variable + "'");
        }
    }
  if (rule.consequent.variable != output_.name() || !output_.has_term(rule.consequent.term))
    {
      throw Error("rule consequent does not name an output term: " + rule.consequent.variable + " is "
                  + rule.consequent.term);
    }
}

const LinguisticVariable&
RuleBase::input(std::string_view name) const
{
  for (const auto& v : inputs_)
    {
      if (v.name() == name)
        {
          return v;
        }
    }
  throw Error("unknown input variable '" + std::string(name) + "'");
}

RuleBase
RuleBase::with_resolution(int resolution) const
{
  return RuleBase(inputs_, output_, rules_, resolution);
}

std::map<std::string, double, std::less<>>
RuleBase::term_activations(const std::map<std::string, double, std::less<>>& crisp_inputs) const
{
  if (rules_.empty())
    {
      throw Error("rule base has no rules");
    }
  InputDegrees degrees;
  for (const auto& var : inputs_)
    {
      auto it = crisp_inputs.find(var.name());
      if (it == crisp_inputs.end())
        {
          throw Error("missing input '" + var.name() + "'");
        }
      degrees.emplace(var.name(), var.fuzzify(it->second));
    }

  std::map<std::string, double, std::less<>> clip;
  for (const auto& rule : rules_)
    {
      double& level = clip[rule.consequent.term];
      level = std::max(level, evaluate_rule(rule, degrees));
    }
  return clip;
}

InferenceResult
RuleBase::infer(const std::map<std::string, double, std::less<>>& crisp_inputs) const
{
  const auto clip = term_activations(crisp_inputs);
  if (std::all_of(clip.begin(), clip.end(), [](const auto& kv) { return kv.second <= 0.0; }))
    {
      throw NoRuleFired();
    }

  InferenceResult result;
  result.aggregated.assign(static_cast<std::size_t>(resolution_), 0.0);
  const double lo = output_.min();
  const double step = (output_.max() - lo) / static_cast<double>(resolution_ - 1);
  for (const auto& [term, level] : clip)
    {
      if (level <= 0.0)
        {
          continue;
        }
      const auto& mf = output_.term(term);
      for (std::size_t i = 0; i < result.aggregated.size(); ++i)
        {
          const double mu = std::min(level, mf(lo + step * static_cast<double>(i)));
          result.aggregated[i] = std::max(result.aggregated[i], mu);
        }
    }
  if (std::all_of(result.aggregated.begin(), result.aggregated.end(), [](double v) { return v <= 0.0; }))
    {
      throw NoRuleFired();
    }
  result.crisp = defuzzify_centroid(result.aggregated, lo, output_.max());
  return result;
}

} // namespace lteu::fuzzy
