#include "formalizer/pddl/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace formalizer::pddl {

std::string emit_grammar() {
  return R"ebnf(// PDDL subset grammar (STRIPS with typing), LALR(1)-compatible EBNF.
// One rule per line. Lowercase names are nonterminals, uppercase names
// are terminals defined by /regex/, quoted strings match token text.
start: domain | problem
domain: "(" "define" "(" "domain" NAME ")" domain_item* ")"
domain_item: require_def | types_def | predicates_def | action_def
require_def: "(" ":requirements" require_key* ")"
require_key: ":strips" | ":typing"
types_def: "(" ":types" typed_name_list ")"
predicates_def: "(" ":predicates" predicate_decl* ")"
predicate_decl: "(" NAME typed_var_list ")"
action_def: "(" ":action" NAME ":parameters" "(" typed_var_list ")" precondition_part? effect_part? ")"
precondition_part: ":precondition" formula
effect_part: ":effect" formula
typed_var_list: typed_var_group* VARIABLE*
typed_var_group: VARIABLE+ "-" NAME
typed_name_list: typed_name_group* NAME*
typed_name_group: NAME+ "-" NAME
formula: atom | conjunction | negation
conjunction: "(" "and" formula* ")"
negation: "(" "not" atom ")"
atom: "(" NAME term* ")"
term: NAME | VARIABLE
problem: "(" "define" "(" "problem" NAME ")" problem_item* ")"
problem_item: domain_ref | require_def | objects_def | init_def | goal_def
domain_ref: "(" ":domain" NAME ")"
objects_def: "(" ":objects" typed_name_list ")"
init_def: "(" ":init" atom* ")"
goal_def: "(" ":goal" formula ")"
NAME: /[a-z][a-z0-9_-]*/
VARIABLE: /\?[a-z][a-z0-9_-]*/
)ebnf";
}

namespace {

// ---------------------------------------------------------------------------
// Grammar representation

struct Symbol {
  enum class Kind { literal, terminal, nonterminal };
  Kind kind;
  std::string text;  // literal text, terminal name, or nonterminal name
};

struct Production {
  int lhs = 0;
  std::vector<int> rhs;
};

struct Grammar {
  std::vector<Symbol> symbols;
  std::unordered_map<std::string, int> symbol_ids;  // keyed by kind-prefixed name
  std::vector<Production> productions;
  std::unordered_map<int, std::vector<int>> productions_by_lhs;
  std::unordered_map<std::string, std::regex> terminal_regex;
  int start = -1;

  int intern(Symbol::Kind kind, const std::string& text) {
    std::string key =
        std::string(1, kind == Symbol::Kind::literal      ? 'L'
                       : kind == Symbol::Kind::terminal   ? 'T'
                                                          : 'N') +
        text;
    auto it = symbol_ids.find(key);
    if (it != symbol_ids.end()) return it->second;
    int id = static_cast<int>(symbols.size());
    symbols.push_back({kind, text});
    symbol_ids.emplace(std::move(key), id);
    return id;
  }

  void add_production(int lhs, std::vector<int> rhs) {
    productions_by_lhs[lhs].push_back(static_cast<int>(productions.size()));
    productions.push_back({lhs, std::move(rhs)});
  }
};

// ---------------------------------------------------------------------------
// EBNF text -> Grammar

struct EbnfToken {
  enum class Type { name, literal, regex, colon, pipe, lparen, rparen, star, plus, question, end };
  Type type;
  std::string text;
};

std::vector<EbnfToken> lex_rule(const std::string& line) {
  std::vector<EbnfToken> tokens;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    switch (c) {
      case ':':
        tokens.push_back({EbnfToken::Type::colon, ":"});
        ++i;
        continue;
      case '|':
        tokens.push_back({EbnfToken::Type::pipe, "|"});
        ++i;
        continue;
      case '(':
        tokens.push_back({EbnfToken::Type::lparen, "("});
        ++i;
        continue;
      case ')':
        tokens.push_back({EbnfToken::Type::rparen, ")"});
        ++i;
        continue;
      case '*':
        tokens.push_back({EbnfToken::Type::star, "*"});
        ++i;
        continue;
      case '+':
        tokens.push_back({EbnfToken::Type::plus, "+"});
        ++i;
        continue;
      case '?':
        tokens.push_back({EbnfToken::Type::question, "?"});
        ++i;
        continue;
      default:
        break;
    }
    if (c == '"') {
      size_t close = line.find('"', i + 1);
      if (close == std::string::npos) {
        throw GrammarError("malformed grammar: unterminated string literal");
      }
      tokens.push_back(
          {EbnfToken::Type::literal, line.substr(i + 1, close - i - 1)});
      i = close + 1;
      continue;
    }
    if (c == '/') {
      size_t close = i + 1;
      while (close < line.size() &&
             (line[close] != '/' || line[close - 1] == '\\')) {
        ++close;
      }
      if (close >= line.size()) {
        throw GrammarError("malformed grammar: unterminated regex");
      }
      tokens.push_back(
          {EbnfToken::Type::regex, line.substr(i + 1, close - i - 1)});
      i = close + 1;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = i;
      while (end < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[end])) ||
              line[end] == '_')) {
        ++end;
      }
      tokens.push_back({EbnfToken::Type::name, line.substr(i, end - i)});
      i = end;
      continue;
    }
    throw GrammarError(std::string("malformed grammar: stray character '") +
                       c + "'");
  }
  tokens.push_back({EbnfToken::Type::end, ""});
  return tokens;
}

bool is_terminal_name(const std::string& name) {
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) || c == '_';
  });
}

// Recursive-descent over one rule body, desugaring groups and postfix
// operators into fresh nonterminals.
class RuleParser {
 public:
  RuleParser(Grammar& grammar, std::vector<EbnfToken> tokens,
             const std::string& rule_name)
      : grammar_(grammar), tokens_(std::move(tokens)), rule_name_(rule_name) {}

  // Alternation of sequences; returns the list of alternatives.
  std::vector<std::vector<int>> parse_alternation(bool top_level) {
    std::vector<std::vector<int>> alternatives;
    alternatives.push_back(parse_sequence());
    while (peek().type == EbnfToken::Type::pipe) {
      next();
      alternatives.push_back(parse_sequence());
    }
    if (top_level && peek().type != EbnfToken::Type::end) {
      throw GrammarError("malformed grammar: trailing tokens in rule '" +
                         rule_name_ + "'");
    }
    return alternatives;
  }

 private:
  std::vector<int> parse_sequence() {
    std::vector<int> sequence;
    while (true) {
      const EbnfToken& tok = peek();
      if (tok.type == EbnfToken::Type::end ||
          tok.type == EbnfToken::Type::pipe ||
          tok.type == EbnfToken::Type::rparen) {
        return sequence;
      }
      sequence.push_back(parse_item());
    }
  }

  int parse_item() {
    int symbol = parse_primary();
    const EbnfToken& tok = peek();
    if (tok.type == EbnfToken::Type::star) {
      next();
      return make_repetition(symbol, /*at_least_one=*/false);
    }
    if (tok.type == EbnfToken::Type::plus) {
      next();
      return make_repetition(symbol, /*at_least_one=*/true);
    }
    if (tok.type == EbnfToken::Type::question) {
      next();
      int opt = fresh_nonterminal("opt");
      grammar_.add_production(opt, {});
      grammar_.add_production(opt, {symbol});
      return opt;
    }
    return symbol;
  }

  int parse_primary() {
    const EbnfToken tok = next();
    switch (tok.type) {
      case EbnfToken::Type::literal:
        return grammar_.intern(Symbol::Kind::literal, tok.text);
      case EbnfToken::Type::name:
        return grammar_.intern(is_terminal_name(tok.text)
                                   ? Symbol::Kind::terminal
                                   : Symbol::Kind::nonterminal,
                               tok.text);
      case EbnfToken::Type::lparen: {
        auto alternatives = parse_alternation(/*top_level=*/false);
        if (next().type != EbnfToken::Type::rparen) {
          throw GrammarError("malformed grammar: unclosed group in rule '" +
                             rule_name_ + "'");
        }
        int group = fresh_nonterminal("group");
        for (auto& alt : alternatives) {
          grammar_.add_production(group, std::move(alt));
        }
        return group;
      }
      default:
        throw GrammarError("malformed grammar: unexpected '" + tok.text +
                           "' in rule '" + rule_name_ + "'");
    }
  }

  int make_repetition(int symbol, bool at_least_one) {
    int rep = fresh_nonterminal(at_least_one ? "plus" : "star");
    if (at_least_one) {
      grammar_.add_production(rep, {symbol});
    } else {
      grammar_.add_production(rep, {});
    }
    grammar_.add_production(rep, {rep, symbol});
    return rep;
  }

  int fresh_nonterminal(const char* hint) {
    return grammar_.intern(
        Symbol::Kind::nonterminal,
        "_" + rule_name_ + "_" + hint + "_" + std::to_string(counter_++));
  }

  const EbnfToken& peek() const { return tokens_[pos_]; }
  const EbnfToken& next() { return tokens_[pos_++]; }

  Grammar& grammar_;
  std::vector<EbnfToken> tokens_;
  std::string rule_name_;
  size_t pos_ = 0;
  int counter_ = 0;
};

Grammar parse_grammar(std::string_view text) {
  Grammar grammar;
  std::istringstream in{std::string(text)};
  std::string line;
  bool saw_rule = false;
  while (std::getline(in, line)) {
    std::string trimmed = line;
    size_t first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first);
    if (trimmed.rfind("//", 0) == 0) continue;
    size_t colon = trimmed.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw GrammarError("malformed grammar: rule without ':' separator");
    }
    std::string lhs_name = trimmed.substr(0, colon);
    while (!lhs_name.empty() && std::isspace(static_cast<unsigned char>(
                                    lhs_name.back()))) {
      lhs_name.pop_back();
    }
    std::string body = trimmed.substr(colon + 1);
    if (is_terminal_name(lhs_name)) {
      auto tokens = lex_rule(body);
      if (tokens.size() != 2 || tokens[0].type != EbnfToken::Type::regex) {
        throw GrammarError("malformed grammar: terminal '" + lhs_name +
                           "' must be a single /regex/");
      }
      grammar.terminal_regex.emplace(
          lhs_name, std::regex(tokens[0].text, std::regex::ECMAScript));
      grammar.intern(Symbol::Kind::terminal, lhs_name);
      continue;
    }
    int lhs = grammar.intern(Symbol::Kind::nonterminal, lhs_name);
    if (!saw_rule) {
      grammar.start = lhs;
      saw_rule = true;
    }
    RuleParser parser(grammar, lex_rule(body), lhs_name);
    for (auto& alt : parser.parse_alternation(/*top_level=*/true)) {
      grammar.add_production(lhs, std::move(alt));
    }
  }
  if (grammar.start < 0) {
    throw GrammarError("malformed grammar: no rules");
  }
  for (const auto& production : grammar.productions) {
    for (int sym : production.rhs) {
      const Symbol& s = grammar.symbols[sym];
      if (s.kind == Symbol::Kind::nonterminal &&
          grammar.productions_by_lhs.find(sym) ==
              grammar.productions_by_lhs.end()) {
        throw GrammarError("malformed grammar: undefined nonterminal '" +
                           s.text + "'");
      }
      if (s.kind == Symbol::Kind::terminal &&
          grammar.terminal_regex.find(s.text) == grammar.terminal_regex.end()) {
        throw GrammarError("malformed grammar: undefined terminal '" + s.text +
                           "'");
      }
    }
  }
  return grammar;
}

// ---------------------------------------------------------------------------
// Input tokenization (independent of the AST parser's lexer)

std::vector<std::string> tokenize_input(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.emplace_back(1, c);
      ++i;
      continue;
    }
    std::string word;
    while (i < text.size() && text[i] != '(' && text[i] != ')' &&
           text[i] != ';' &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      word.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
      ++i;
    }
    tokens.push_back(std::move(word));
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Earley recognition

struct EarleyItem {
  int production;
  int dot;
  int origin;
};

uint64_t item_key(const EarleyItem& item) {
  return (static_cast<uint64_t>(item.production) << 40) ^
         (static_cast<uint64_t>(item.dot) << 24) ^
         static_cast<uint64_t>(item.origin);
}

std::unordered_set<int> compute_nullable(const Grammar& grammar) {
  std::unordered_set<int> nullable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& production : grammar.productions) {
      if (nullable.count(production.lhs)) continue;
      bool all_nullable = std::all_of(
          production.rhs.begin(), production.rhs.end(), [&](int sym) {
            return grammar.symbols[sym].kind == Symbol::Kind::nonterminal &&
                   nullable.count(sym) > 0;
          });
      if (all_nullable) {
        nullable.insert(production.lhs);
        changed = true;
      }
    }
  }
  return nullable;
}

bool token_matches(const Grammar& grammar, const Symbol& symbol,
                   const std::string& token) {
  if (symbol.kind == Symbol::Kind::literal) {
    return token == symbol.text;
  }
  const auto& re = grammar.terminal_regex.at(symbol.text);
  return std::regex_match(token, re);
}

bool earley_accepts(const Grammar& grammar,
                    const std::vector<std::string>& tokens) {
  const auto nullable = compute_nullable(grammar);
  const size_t n = tokens.size();
  std::vector<std::vector<EarleyItem>> chart(n + 1);
  std::vector<std::unordered_set<uint64_t>> seen(n + 1);

  auto add = [&](size_t set, EarleyItem item) {
    if (seen[set].insert(item_key(item)).second) {
      chart[set].push_back(item);
    }
  };

  for (int prod : grammar.productions_by_lhs.at(grammar.start)) {
    add(0, {prod, 0, 0});
  }

  for (size_t i = 0; i <= n; ++i) {
    for (size_t idx = 0; idx < chart[i].size(); ++idx) {
      EarleyItem item = chart[i][idx];
      const Production& production = grammar.productions[item.production];
      if (item.dot == static_cast<int>(production.rhs.size())) {
        // Completion.
        for (size_t j = 0; j < chart[item.origin].size(); ++j) {
          EarleyItem parent = chart[item.origin][j];
          const Production& parent_prod = grammar.productions[parent.production];
          if (parent.dot < static_cast<int>(parent_prod.rhs.size()) &&
              parent_prod.rhs[parent.dot] == production.lhs) {
            add(i, {parent.production, parent.dot + 1, parent.origin});
          }
        }
        continue;
      }
      int next_sym = production.rhs[item.dot];
      const Symbol& symbol = grammar.symbols[next_sym];
      if (symbol.kind == Symbol::Kind::nonterminal) {
        // Prediction, with the standard nullable shortcut.
        auto it = grammar.productions_by_lhs.find(next_sym);
        if (it != grammar.productions_by_lhs.end()) {
          for (int prod : it->second) {
            add(i, {prod, 0, static_cast<int>(i)});
          }
        }
        if (nullable.count(next_sym)) {
          add(i, {item.production, item.dot + 1, item.origin});
        }
      } else if (i < n && token_matches(grammar, symbol, tokens[i])) {
        add(i + 1, {item.production, item.dot + 1, item.origin});
      }
    }
  }

  for (const EarleyItem& item : chart[n]) {
    const Production& production = grammar.productions[item.production];
    if (production.lhs == grammar.start && item.origin == 0 &&
        item.dot == static_cast<int>(production.rhs.size())) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool grammar_accepts(std::string_view grammar_text, std::string_view text) {
  Grammar grammar = parse_grammar(grammar_text);
  return earley_accepts(grammar, tokenize_input(text));
}

}  // namespace formalizer::pddl
