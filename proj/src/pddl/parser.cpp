#include "formalizer/pddl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace formalizer::pddl {

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::unbalanced_parenthesis:
      return "unbalanced parenthesis";
    case ParseError::Kind::unexpected_token:
      return "unexpected token";
    case ParseError::Kind::truncated_input:
      return "truncated input";
    case ParseError::Kind::unknown_section:
      return "unknown section";
  }
  return "unknown";
}

namespace {

struct Token {
  enum class Type { lparen, rparen, word, eof };

  Type type = Type::eof;
  std::string text;
  int line = 1;
  int column = 1;
};

struct ParseErrorException {
  ParseError error;
};

[[noreturn]] void fail(ParseError::Kind kind, const Token& at, std::string message) {
  throw ParseErrorException{ParseError{kind, at.line, at.column, std::move(message)}};
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') {
        advance(text[i]);
        ++i;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.push_back({c == '(' ? Token::Type::lparen : Token::Type::rparen,
                        std::string(1, c), line, column});
      advance(c);
      ++i;
      continue;
    }
    Token tok{Token::Type::word, {}, line, column};
    while (i < text.size()) {
      char w = text[i];
      if (w == '(' || w == ')' || w == ';' ||
          std::isspace(static_cast<unsigned char>(w))) {
        break;
      }
      tok.text.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(w))));
      advance(w);
      ++i;
    }
    tokens.push_back(std::move(tok));
  }
  tokens.push_back({Token::Type::eof, "", line, column});
  return tokens;
}

bool is_name(const std::string& w) {
  if (w.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(w[0]))) return false;
  return std::all_of(w.begin(), w.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

bool is_variable(const std::string& w) {
  return w.size() >= 2 && w[0] == '?' && is_name(w.substr(1));
}

bool is_keyword(const std::string& w) {
  return w.size() >= 2 && w[0] == ':' && is_name(w.substr(1));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  DomainAst parse_domain() {
    expect_lparen_header();
    expect_word("define", /*in_header=*/true);
    expect_lparen_header();
    expect_word("domain", /*in_header=*/true);
    DomainAst domain;
    domain.name = expect_name(/*in_header=*/true);
    expect_rparen_header();
    while (true) {
      const Token& tok = peek();
      if (tok.type == Token::Type::rparen) {
        next();
        break;
      }
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::unbalanced_parenthesis, tok,
             "unbalanced parenthesis");
      }
      parse_domain_section(domain);
    }
    expect_end();
    declare_implicit_parents(domain);
    return domain;
  }

  ProblemAst parse_problem() {
    expect_lparen_header();
    expect_word("define", /*in_header=*/true);
    expect_lparen_header();
    expect_word("problem", /*in_header=*/true);
    ProblemAst problem;
    problem.name = expect_name(/*in_header=*/true);
    expect_rparen_header();
    problem.goal = Formula::make_and({});
    while (true) {
      const Token& tok = peek();
      if (tok.type == Token::Type::rparen) {
        next();
        break;
      }
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::unbalanced_parenthesis, tok,
             "unbalanced parenthesis");
      }
      parse_problem_section(problem);
    }
    expect_end();
    return problem;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail_here(ParseError::Kind kind, std::string message) {
    fail(kind, peek(), std::move(message));
  }

  void expect_lparen_header() {
    const Token& tok = next();
    if (tok.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, tok, "truncated input");
    }
    if (tok.type != Token::Type::lparen) {
      fail(ParseError::Kind::unexpected_token, tok,
           "expected '(', got '" + tok.text + "'");
    }
  }

  void expect_rparen_header() {
    const Token& tok = next();
    if (tok.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, tok, "truncated input");
    }
    if (tok.type != Token::Type::rparen) {
      fail(ParseError::Kind::unexpected_token, tok,
           "expected ')', got '" + tok.text + "'");
    }
  }

  void expect_word(const std::string& word, bool in_header) {
    const Token& tok = next();
    if (tok.type == Token::Type::eof) {
      fail(in_header ? ParseError::Kind::truncated_input
                     : ParseError::Kind::unbalanced_parenthesis,
           tok, in_header ? "truncated input" : "unbalanced parenthesis");
    }
    if (tok.type != Token::Type::word || tok.text != word) {
      fail(ParseError::Kind::unexpected_token, tok,
           "expected '" + word + "', got '" + tok.text + "'");
    }
  }

  std::string expect_name(bool in_header) {
    const Token& tok = next();
    if (tok.type == Token::Type::eof) {
      fail(in_header ? ParseError::Kind::truncated_input
                     : ParseError::Kind::truncated_input,
           tok, "truncated input");
    }
    if (tok.type != Token::Type::word || !is_name(tok.text)) {
      fail(ParseError::Kind::unexpected_token, tok,
           "expected a name, got '" + tok.text + "'");
    }
    return tok.text;
  }

  // Tokens left over after the closing paren of (define ...).
  void expect_end() {
    const Token& tok = peek();
    if (tok.type == Token::Type::eof) return;
    if (tok.type == Token::Type::rparen) {
      fail(ParseError::Kind::unbalanced_parenthesis, tok,
           "unbalanced parenthesis");
    }
    fail(ParseError::Kind::unexpected_token, tok,
         "trailing input after definition: '" + tok.text + "'");
  }

  void parse_domain_section(DomainAst& domain) {
    expect_section_open();
    const Token& head = next();
    if (head.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, head, "truncated input");
    }
    if (head.type != Token::Type::word || !is_keyword(head.text)) {
      fail(ParseError::Kind::unexpected_token, head,
           "expected a section keyword, got '" + head.text + "'");
    }
    if (head.text == ":requirements") {
      parse_requirements(domain.requirements);
    } else if (head.text == ":types") {
      parse_typed_names(domain_type_sink(domain));
    } else if (head.text == ":predicates") {
      parse_predicates(domain);
    } else if (head.text == ":action") {
      parse_action(domain);
    } else {
      fail(ParseError::Kind::unknown_section, head,
           "unknown domain section '" + head.text + "'");
    }
  }

  void expect_section_open() {
    const Token& tok = next();
    if (tok.type == Token::Type::eof) {
      fail(ParseError::Kind::unbalanced_parenthesis, tok,
           "unbalanced parenthesis");
    }
    if (tok.type != Token::Type::lparen) {
      fail(ParseError::Kind::unexpected_token, tok,
           "expected '(', got '" + tok.text + "'");
    }
  }

  void parse_requirements(std::vector<std::string>& requirements) {
    while (true) {
      const Token& tok = next();
      if (tok.type == Token::Type::rparen) return;
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, tok, "truncated input");
      }
      if (tok.type != Token::Type::word || !is_keyword(tok.text)) {
        fail(ParseError::Kind::unexpected_token, tok,
             "expected a requirement flag, got '" + tok.text + "'");
      }
      if (std::find(requirements.begin(), requirements.end(), tok.text) ==
          requirements.end()) {
        requirements.push_back(tok.text);
      }
    }
  }

  // (:types a b - parent c) style typed name lists; also used for :objects.
  std::vector<TypedName>* domain_type_sink(DomainAst& domain) {
    type_decls_ = &domain.types;
    return nullptr;
  }

  void parse_typed_names(std::vector<TypedName>* out) {
    std::vector<std::string> pending;
    while (true) {
      const Token& tok = next();
      if (tok.type == Token::Type::rparen) {
        for (auto& name : pending) emit_typed_name(out, name, "object", tok);
        return;
      }
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, tok, "truncated input");
      }
      if (tok.type == Token::Type::word && tok.text == "-") {
        const Token& type_tok = next();
        if (type_tok.type == Token::Type::eof) {
          fail(ParseError::Kind::truncated_input, type_tok, "truncated input");
        }
        if (type_tok.type != Token::Type::word || !is_name(type_tok.text)) {
          fail(ParseError::Kind::unexpected_token, type_tok,
               "expected a type name, got '" + type_tok.text + "'");
        }
        if (pending.empty()) {
          fail(ParseError::Kind::unexpected_token, tok,
               "dangling '-' in typed list");
        }
        for (auto& name : pending) {
          emit_typed_name(out, name, type_tok.text, type_tok);
        }
        pending.clear();
        continue;
      }
      if (tok.type != Token::Type::word || !is_name(tok.text)) {
        fail(ParseError::Kind::unexpected_token, tok,
             "expected a name, got '" + tok.text + "'");
      }
      pending.push_back(tok.text);
    }
  }

  void emit_typed_name(std::vector<TypedName>* out, const std::string& name,
                       const std::string& type, const Token& at) {
    if (out != nullptr) {
      out->push_back({name, type});
      return;
    }
    // :types sink: record a type declaration unless already declared.
    auto declared = [&](const std::string& n) {
      return std::any_of(type_decls_->begin(), type_decls_->end(),
                         [&](const TypeDecl& d) { return d.name == n; });
    };
    if (declared(name)) {
      fail(ParseError::Kind::unexpected_token, at,
           "duplicate type declaration '" + name + "'");
    }
    type_decls_->push_back({name, type});
  }

  void parse_predicates(DomainAst& domain) {
    while (true) {
      const Token& tok = next();
      if (tok.type == Token::Type::rparen) return;
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, tok, "truncated input");
      }
      if (tok.type != Token::Type::lparen) {
        fail(ParseError::Kind::unexpected_token, tok,
             "expected '(', got '" + tok.text + "'");
      }
      PredicateDecl decl;
      const Token& name_tok = next();
      if (name_tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, name_tok, "truncated input");
      }
      if (name_tok.type != Token::Type::word || !is_name(name_tok.text)) {
        fail(ParseError::Kind::unexpected_token, name_tok,
             "expected a predicate name, got '" + name_tok.text + "'");
      }
      decl.name = name_tok.text;
      parse_typed_variables(decl.params, name_tok);
      for (const auto& existing : domain.predicates) {
        if (existing.name == decl.name) {
          fail(ParseError::Kind::unexpected_token, name_tok,
               "duplicate predicate declaration '" + decl.name + "'");
        }
      }
      domain.predicates.push_back(std::move(decl));
    }
  }

  // Variables up to the enclosing ')'; enforces per-declaration uniqueness.
  void parse_typed_variables(std::vector<TypedName>& out, const Token& ctx) {
    std::vector<std::string> pending;
    std::unordered_set<std::string> seen;
    auto push = [&](const std::string& var, const std::string& type,
                    const Token& at) {
      if (!seen.insert(var).second) {
        fail(ParseError::Kind::unexpected_token, at,
             "duplicate variable '" + var + "' in declaration of '" +
                 ctx.text + "'");
      }
      out.push_back({var, type});
    };
    while (true) {
      const Token& tok = next();
      if (tok.type == Token::Type::rparen) {
        for (auto& var : pending) push(var, "object", tok);
        return;
      }
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, tok, "truncated input");
      }
      if (tok.type == Token::Type::word && tok.text == "-") {
        const Token& type_tok = next();
        if (type_tok.type == Token::Type::eof) {
          fail(ParseError::Kind::truncated_input, type_tok, "truncated input");
        }
        if (type_tok.type != Token::Type::word || !is_name(type_tok.text)) {
          fail(ParseError::Kind::unexpected_token, type_tok,
               "expected a type name, got '" + type_tok.text + "'");
        }
        if (pending.empty()) {
          fail(ParseError::Kind::unexpected_token, tok,
               "dangling '-' in parameter list");
        }
        for (auto& var : pending) push(var, type_tok.text, type_tok);
        pending.clear();
        continue;
      }
      if (tok.type != Token::Type::word || !is_variable(tok.text)) {
        fail(ParseError::Kind::unexpected_token, tok,
             "expected a variable, got '" + tok.text + "'");
      }
      pending.push_back(tok.text);
    }
  }

  void parse_action(DomainAst& domain) {
    ActionDecl action;
    const Token& name_tok = next();
    if (name_tok.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, name_tok, "truncated input");
    }
    if (name_tok.type != Token::Type::word || !is_name(name_tok.text)) {
      fail(ParseError::Kind::unexpected_token, name_tok,
           "expected an action name, got '" + name_tok.text + "'");
    }
    action.name = name_tok.text;
    action.precondition = Formula::make_and({});
    action.effect = Formula::make_and({});
    bool saw_parameters = false;
    while (true) {
      const Token& tok = next();
      if (tok.type == Token::Type::rparen) break;
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, tok, "truncated input");
      }
      if (tok.type != Token::Type::word || !is_keyword(tok.text)) {
        fail(ParseError::Kind::unexpected_token, tok,
             "expected an action clause keyword, got '" + tok.text + "'");
      }
      if (tok.text == ":parameters") {
        expect_section_open();
        parse_typed_variables(action.params, name_tok);
        saw_parameters = true;
      } else if (tok.text == ":precondition") {
        action.precondition = parse_formula();
      } else if (tok.text == ":effect") {
        action.effect = parse_formula();
      } else {
        fail(ParseError::Kind::unknown_section, tok,
             "unknown action clause '" + tok.text + "'");
      }
    }
    (void)saw_parameters;  // zero-parameter actions may omit the clause
    for (const auto& existing : domain.actions) {
      if (existing.name == action.name) {
        fail(ParseError::Kind::unexpected_token, name_tok,
             "duplicate action declaration '" + action.name + "'");
      }
    }
    domain.actions.push_back(std::move(action));
  }

  Formula parse_formula() {
    const Token& open = next();
    if (open.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, open, "truncated input");
    }
    if (open.type != Token::Type::lparen) {
      fail(ParseError::Kind::unexpected_token, open,
           "expected '(', got '" + open.text + "'");
    }
    const Token& head = peek();
    if (head.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, head, "truncated input");
    }
    if (head.type == Token::Type::rparen) {
      fail(ParseError::Kind::unexpected_token, head, "empty formula");
    }
    if (head.type != Token::Type::word) {
      fail(ParseError::Kind::unexpected_token, head,
           "expected a formula head, got '" + head.text + "'");
    }
    if (head.text == "and") {
      next();
      std::vector<Formula> conjuncts;
      while (true) {
        const Token& tok = peek();
        if (tok.type == Token::Type::rparen) {
          next();
          return Formula::make_and(std::move(conjuncts));
        }
        if (tok.type == Token::Type::eof) {
          fail(ParseError::Kind::truncated_input, tok, "truncated input");
        }
        conjuncts.push_back(parse_formula());
      }
    }
    if (head.text == "not") {
      next();
      const Token& inner_open = next();
      if (inner_open.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, inner_open, "truncated input");
      }
      if (inner_open.type != Token::Type::lparen) {
        fail(ParseError::Kind::unexpected_token, inner_open,
             "expected '(', got '" + inner_open.text + "'");
      }
      const Token& inner_head = peek();
      if (inner_head.type == Token::Type::word &&
          (inner_head.text == "and" || inner_head.text == "not")) {
        fail(ParseError::Kind::unexpected_token, inner_head,
             "negation must apply directly to an atom");
      }
      Atom atom = parse_atom_body();
      const Token& close = next();
      if (close.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, close, "truncated input");
      }
      if (close.type != Token::Type::rparen) {
        fail(ParseError::Kind::unexpected_token, close,
             "expected ')', got '" + close.text + "'");
      }
      return Formula::make_not(std::move(atom));
    }
    return Formula::make_atom(parse_atom_body());
  }

  // Predicate name plus terms, consuming the closing ')'.
  Atom parse_atom_body() {
    Atom atom;
    const Token& name_tok = next();
    if (name_tok.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, name_tok, "truncated input");
    }
    if (name_tok.type != Token::Type::word || !is_name(name_tok.text)) {
      fail(ParseError::Kind::unexpected_token, name_tok,
           "expected a predicate name, got '" + name_tok.text + "'");
    }
    atom.predicate = name_tok.text;
    while (true) {
      const Token& tok = next();
      if (tok.type == Token::Type::rparen) return atom;
      if (tok.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, tok, "truncated input");
      }
      if (tok.type != Token::Type::word ||
          (!is_name(tok.text) && !is_variable(tok.text))) {
        fail(ParseError::Kind::unexpected_token, tok,
             "expected a term, got '" + tok.text + "'");
      }
      atom.terms.push_back(tok.text);
    }
  }

  void parse_problem_section(ProblemAst& problem) {
    expect_section_open();
    const Token& head = next();
    if (head.type == Token::Type::eof) {
      fail(ParseError::Kind::truncated_input, head, "truncated input");
    }
    if (head.type != Token::Type::word || !is_keyword(head.text)) {
      fail(ParseError::Kind::unexpected_token, head,
           "expected a section keyword, got '" + head.text + "'");
    }
    if (head.text == ":domain") {
      problem.domain_name = expect_name(/*in_header=*/false);
      const Token& close = next();
      if (close.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, close, "truncated input");
      }
      if (close.type != Token::Type::rparen) {
        fail(ParseError::Kind::unexpected_token, close,
             "expected ')', got '" + close.text + "'");
      }
    } else if (head.text == ":objects") {
      parse_typed_names(&problem.objects);
    } else if (head.text == ":init") {
      while (true) {
        const Token& tok = next();
        if (tok.type == Token::Type::rparen) break;
        if (tok.type == Token::Type::eof) {
          fail(ParseError::Kind::truncated_input, tok, "truncated input");
        }
        if (tok.type != Token::Type::lparen) {
          fail(ParseError::Kind::unexpected_token, tok,
               "expected '(', got '" + tok.text + "'");
        }
        Atom atom = parse_atom_body();
        require_ground(atom, tok);
        problem.init.push_back(std::move(atom));
      }
    } else if (head.text == ":goal") {
      problem.goal = parse_formula();
      require_ground_formula(problem.goal, head);
      const Token& close = next();
      if (close.type == Token::Type::eof) {
        fail(ParseError::Kind::truncated_input, close, "truncated input");
      }
      if (close.type != Token::Type::rparen) {
        fail(ParseError::Kind::unexpected_token, close,
             "expected ')', got '" + close.text + "'");
      }
    } else if (head.text == ":requirements") {
      std::vector<std::string> ignored;
      parse_requirements(ignored);
    } else {
      fail(ParseError::Kind::unknown_section, head,
           "unknown problem section '" + head.text + "'");
    }
  }

  void require_ground(const Atom& atom, const Token& at) {
    for (const auto& term : atom.terms) {
      if (!term.empty() && term[0] == '?') {
        fail(ParseError::Kind::unexpected_token, at,
             "variable '" + term + "' not allowed in ground atom");
      }
    }
  }

  void require_ground_formula(const Formula& f, const Token& at) {
    if (f.kind == Formula::Kind::conjunction) {
      for (const auto& child : f.children) require_ground_formula(child, at);
    } else {
      require_ground(f.atom, at);
    }
  }

  // Types mentioned only as parents become declared subtypes of object.
  static void declare_implicit_parents(DomainAst& domain) {
    for (size_t i = 0; i < domain.types.size(); ++i) {
      const std::string parent = domain.types[i].parent;
      if (parent == "object") continue;
      bool declared = std::any_of(
          domain.types.begin(), domain.types.end(),
          [&](const TypeDecl& d) { return d.name == parent; });
      if (!declared) domain.types.push_back({parent, "object"});
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  std::vector<TypeDecl>* type_decls_ = nullptr;
};

}  // namespace

ParseResult<DomainAst> parse_domain(std::string_view text) {
  try {
    Parser parser(text);
    return parser.parse_domain();
  } catch (const ParseErrorException& e) {
    return e.error;
  }
}

ParseResult<ProblemAst> parse_problem(std::string_view text) {
  try {
    Parser parser(text);
    return parser.parse_problem();
  } catch (const ParseErrorException& e) {
    return e.error;
  }
}

}  // namespace formalizer::pddl
