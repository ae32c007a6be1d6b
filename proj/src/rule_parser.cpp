#include <lteu/fuzzy.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lteu::fuzzy {

namespace {

bool
iequals(std::string_view a, std::string_view b)
{
  return a.size() == b.size()
         && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
              return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
            });
}

std::string
strip_comments(std::string_view text)
{
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char ch : text)
    {
      if (ch == '#')
        {
          in_comment = true;
        }
      else if (ch == '\n')
        {
          in_comment = false;
        }
      out.push_back(in_comment ? ' ' : ch);
    }
  return out;
}

class RuleParser
{
public:
  RuleParser(std::string text, const Vocabulary& vocabulary) : text_(std::move(text)), vocab_(vocabulary) {}

  std::vector<FuzzyRule> parse()
  {
    std::vector<FuzzyRule> rules;
    skip_separators();
    if (at_end())
      {
        throw ParseError("empty rule base");
      }
    while (!at_end())
      {
        rules.push_back(statement());
        skip_separators();
      }
    return rules;
  }

private:
  FuzzyRule statement()
  {
    expect_keyword("if");
    FuzzyRule rule;
    rule.antecedent.push_back(input_clause());
    for (;;)
      {
        skip_ws();
        const std::string word = peek_word();
        if (iequals(word, "and") || iequals(word, "or"))
          {
            pos_ += word.size();
            rule.connectives.push_back(iequals(word, "and") ? Connective::and_ : Connective::or_);
            rule.antecedent.push_back(input_clause());
          }
        else if (iequals(word, "then"))
          {
            pos_ += word.size();
            break;
          }
        else
          {
            fail("expected 'and', 'or' or 'then' but found '" + preview() + "'");
          }
      }
    rule.consequent = output_clause();
    skip_label();
    return rule;
  }

  Clause input_clause()
  {
    Clause c = raw_clause();
    auto var = std::find_if(vocab_.inputs.begin(), vocab_.inputs.end(), [&](const LinguisticVariable& v) {
      return v.name() == c.variable;
    });
    if (var == vocab_.inputs.end())
      {
        fail("unknown variable '" + c.variable + "'");
      }
    if (!var->has_term(c.term))
      {
        fail("unknown term '" + c.term + "' for variable '" + c.variable + "'");
      }
    return c;
  }

  Clause output_clause()
  {
    Clause c = raw_clause();
    if (vocab_.output == nullptr || vocab_.output->name() != c.variable)
      {
        fail("unknown output variable '" + c.variable + "'");
      }
    if (!vocab_.output->has_term(c.term))
      {
        fail("unknown term '" + c.term + "' for variable '" + c.variable + "'");
      }
    return c;
  }

  // `( <var> is <term> )` with balanced parentheses inside identifiers.
  Clause raw_clause()
  {
    skip_ws();
    if (at_end() || text_[pos_] != '(')
      {
        fail("expected '(' to open a clause but found '" + preview() + "'");
      }
    const std::size_t start = pos_;
    int depth = 0;
    for (; pos_ < text_.size(); ++pos_)
      {
        if (text_[pos_] == '(')
          {
            ++depth;
          }
        else if (text_[pos_] == ')' && --depth == 0)
          {
            break;
          }
      }
    if (depth != 0)
      {
        pos_ = start;
        fail("unbalanced parentheses in clause");
      }
    std::istringstream body(text_.substr(start + 1, pos_ - start - 1));
    ++pos_;
    std::vector<std::string> words;
    for (std::string w; body >> w;)
      {
        words.push_back(w);
      }
    if (words.size() != 3 || !iequals(words[1], "is"))
      {
        pos_ = start;
        fail("clause must read '(<variable> is <term>)'");
      }
    return Clause{words[0], words[2]};
  }

  void skip_label()
  {
    skip_ws();
    if (at_end() || text_[pos_] != '(')
      {
        return;
      }
    std::size_t p = pos_ + 1;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])))
      {
        ++p;
      }
    if (p > pos_ + 1 && p < text_.size() && text_[p] == ')')
      {
        pos_ = p + 1;
      }
  }

  void expect_keyword(std::string_view kw)
  {
    skip_ws();
    const std::string word = peek_word();
    if (!iequals(word, kw))
      {
        fail("expected '" + std::string(kw) + "' but found '" + preview() + "'");
      }
    pos_ += word.size();
  }

  std::string peek_word() const
  {
    std::size_t p = pos_;
    while (p < text_.size() && std::isalpha(static_cast<unsigned char>(text_[p])))
      {
        ++p;
      }
    if (p < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[p])) || text_[p] == '_'))
      {
        return {};
      }
    return text_.substr(pos_, p - pos_);
  }

  std::string preview() const
  {
    if (at_end())
      {
        return "end of input";
      }
    std::size_t p = pos_;
    while (p < text_.size() && !std::isspace(static_cast<unsigned char>(text_[p])) && p - pos_ < 24)
      {
        ++p;
      }
    return text_.substr(pos_, p - pos_);
  }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      {
        ++pos_;
      }
  }

  void skip_separators()
  {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == ';'))
      {
        ++pos_;
      }
  }

  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& msg) const
  {
    const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos_), '\n');
    throw ParseError("rule line " + std::to_string(line) + ": " + msg);
  }

  std::string text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

} // namespace

std::vector<FuzzyRule>
parse_rule_base(std::string_view text, const Vocabulary& vocabulary)
{
  return RuleParser(strip_comments(text), vocabulary).parse();
}

std::string
render_rules(std::span<const FuzzyRule> rules)
{
  std::string out;
  for (const auto& rule : rules)
    {
      out += "if";
      for (std::size_t i = 0; i < rule.antecedent.size(); ++i)
        {
          if (i > 0)
            {
              out += rule.connectives[i - 1] == Connective::and_ ? " and" : " or";
            }
          out += " (" + rule.antecedent[i].variable + " is " + rule.antecedent[i].term + ")";
        }
      out += " then (" + rule.consequent.variable + " is " + rule.consequent.term + ")\n";
    }
  return out;
}

} // namespace lteu::fuzzy
