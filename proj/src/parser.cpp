#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "decsynth/model_io.hpp"

namespace decsynth {

namespace {

constexpr std::array kKeywords{"plant", "states",      "marked", "initial", "controllable",
                               "uncontrollable", "trans", "requirement", "needs", "or",
                               "and", "not", "T", "F"};

// Words that end an identifier list inside a plant block.
constexpr std::array kSectionWords{"marked", "initial", "controllable", "uncontrollable", "trans"};

bool is_word_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

enum class Tok { Word, Quoted, LBrace, RBrace, Colon, Dot, Dash, Arrow, End };

const char* describe(Tok t)
{
    switch (t) {
    case Tok::Word: return "identifier";
    case Tok::Quoted: return "quoted identifier";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Dash: return "'-'";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    Span span;
};

class Lexer {
public:
    Lexer(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            if (pos_ >= text_.size())
                break;
            Span start = here();
            char c = text_[pos_];
            if (is_word_char(c)) {
                std::size_t b = pos_;
                while (pos_ < text_.size() && is_word_char(text_[pos_]))
                    advance();
                out.push_back({Tok::Word, std::string(text_.substr(b, pos_ - b)), finish(start)});
            } else if (c == '"') {
                lex_quoted(out, start);
            } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                advance();
                advance();
                out.push_back({Tok::Arrow, "->", finish(start)});
            } else if (c == '{' || c == '}' || c == ':' || c == '.' || c == '-') {
                advance();
                Tok k = c == '{' ? Tok::LBrace
                        : c == '}' ? Tok::RBrace
                        : c == ':' ? Tok::Colon
                        : c == '.' ? Tok::Dot
                                   : Tok::Dash;
                out.push_back({k, std::string(1, c), finish(start)});
            } else {
                advance();
                auto span = finish(start);
                std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                                         ? "byte 0x" + hex(static_cast<unsigned char>(c))
                                         : "'" + std::string(1, c) + "'";
                error(span, "unexpected character " + shown);
            }
        }
        out.push_back({Tok::End, "", here()});
        return out;
    }

private:
    static std::string hex(unsigned char c)
    {
        const char* digits = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 15]};
    }

    void error(Span span, std::string msg)
    {
        diags_.push_back({Severity::Error, span, "E-LEX", std::move(msg)});
    }

    Span here() const { return Span{line_, column_, pos_, 0}; }
    Span finish(Span s) const
    {
        s.length = pos_ - s.offset;
        return s;
    }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    void lex_quoted(std::vector<Token>& out, Span start)
    {
        advance(); // opening quote
        std::string value;
        while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size() &&
                (text_[pos_ + 1] == '"' || text_[pos_ + 1] == '\\'))
                advance();
            value += text_[pos_];
            advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != '"') {
            error(finish(start), "unterminated quoted identifier");
            return;
        }
        advance();
        auto span = finish(start);
        if (value.empty()) {
            error(span, "empty quoted identifier");
            return;
        }
        out.push_back({Tok::Quoted, std::move(value), span});
    }

    std::string_view text_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// Syntax tree ----------------------------------------------------------------

struct Name {
    std::string text;
    Span span;
};

struct TransDecl {
    Name from, event, to;
};

struct PlantDecl {
    Name name;
    std::vector<Name> states;
    std::optional<std::vector<Name>> marked;
    std::optional<Name> initial;
    std::vector<Name> controllable, uncontrollable;
    std::vector<TransDecl> trans;
};

struct LitDecl {
    Literal::Kind kind = Literal::Kind::True;
    Name plant, state;
    bool negated = false;
};

struct ReqDecl {
    Name id;
    Name event;
    std::vector<std::vector<LitDecl>> dnf;
};

struct SyntaxError {
    Diagnostic diag;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
        : toks_(std::move(tokens)), diags_(diags)
    {
    }

    void run(std::vector<PlantDecl>& plants, std::vector<ReqDecl>& reqs)
    {
        while (peek().kind != Tok::End) {
            std::size_t before = pos_;
            try {
                if (is_word("plant"))
                    plants.push_back(plant());
                else if (is_word("requirement"))
                    reqs.push_back(requirement());
                else
                    fail(peek(), "expected 'plant' or 'requirement'");
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover(before);
            }
        }
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next()
    {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1)
            ++pos_;
        return t;
    }
    bool is_word(std::string_view w, std::size_t ahead = 0) const
    {
        return peek(ahead).kind == Tok::Word && peek(ahead).text == w;
    }
    bool is_section_word() const
    {
        return peek().kind == Tok::Word &&
               std::find(kSectionWords.begin(), kSectionWords.end(), peek().text) !=
                   kSectionWords.end();
    }

    [[noreturn]] void fail(const Token& at, const std::string& msg)
    {
        std::string found = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
        throw SyntaxError{{Severity::Error, at.span, "E-SYNTAX", msg + ", found " + found}};
    }

    void expect(Tok k)
    {
        if (peek().kind != k)
            fail(peek(), std::string("expected ") + describe(k));
        next();
    }
    void expect_word(std::string_view w)
    {
        if (!is_word(w))
            fail(peek(), "expected '" + std::string(w) + "'");
        next();
    }
    Name ident(const char* what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Word && t.kind != Tok::Quoted)
            fail(t, std::string("expected ") + what);
        next();
        return {t.text, t.span};
    }
    std::vector<Name> ident_list()
    {
        std::vector<Name> out;
        while ((peek().kind == Tok::Word && !is_section_word()) || peek().kind == Tok::Quoted)
            out.push_back(ident("identifier"));
        return out;
    }

    // Skip to the next top-level declaration, consuming at least one token.
    void recover(std::size_t before)
    {
        if (pos_ == before)
            next();
        int depth = depth_;
        depth_ = 0;
        while (peek().kind != Tok::End) {
            if (depth <= 0 && (is_word("plant") || is_word("requirement")))
                return;
            if (peek().kind == Tok::LBrace)
                ++depth;
            if (peek().kind == Tok::RBrace && --depth <= 0) {
                next();
                depth = 0;
                continue;
            }
            next();
        }
    }

    PlantDecl plant()
    {
        PlantDecl p;
        expect_word("plant");
        p.name = ident("plant name");
        expect(Tok::LBrace);
        depth_ = 1;
        expect_word("states");
        p.states = ident_list();
        if (p.states.empty())
            fail(peek(), "expected at least one state name");
        if (is_word("marked")) {
            next();
            p.marked = ident_list();
        }
        if (is_word("initial")) {
            next();
            p.initial = ident("initial state");
        }
        while (peek().kind != Tok::RBrace) {
            if (is_word("controllable")) {
                next();
                auto l = ident_list();
                p.controllable.insert(p.controllable.end(), l.begin(), l.end());
            } else if (is_word("uncontrollable")) {
                next();
                auto l = ident_list();
                p.uncontrollable.insert(p.uncontrollable.end(), l.begin(), l.end());
            } else if (is_word("trans")) {
                next();
                TransDecl t;
                t.from = ident("source state");
                expect(Tok::Dash);
                t.event = ident("event");
                expect(Tok::Arrow);
                t.to = ident("target state");
                p.trans.push_back(std::move(t));
            } else {
                fail(peek(), "expected 'controllable', 'uncontrollable', 'trans' or '}'");
            }
        }
        next();
        depth_ = 0;
        return p;
    }

    ReqDecl requirement()
    {
        ReqDecl r;
        expect_word("requirement");
        r.id = ident("requirement id");
        if (peek().kind == Tok::LBrace)
            throw SyntaxError{{Severity::Error, peek().span, "E-REQ-AUT",
                               "requirement automata are not supported; a requirement must be a "
                               "state-event invariant 'event needs condition'"}};
        expect(Tok::Colon);
        r.event = ident("event");
        expect_word("needs");
        r.dnf.push_back(conjunction());
        while (is_word("or")) {
            next();
            r.dnf.push_back(conjunction());
        }
        return r;
    }

    std::vector<LitDecl> conjunction()
    {
        std::vector<LitDecl> c{literal()};
        while (is_word("and")) {
            next();
            c.push_back(literal());
        }
        return c;
    }

    LitDecl literal()
    {
        LitDecl l;
        if (is_word("not") && peek(1).kind != Tok::Dot) {
            next();
            l.negated = true;
        }
        if ((is_word("T") || is_word("F")) && peek(1).kind != Tok::Dot) {
            if (l.negated)
                fail(peek(), "'not' applies to state references only");
            l.kind = peek().text == "T" ? Literal::Kind::True : Literal::Kind::False;
            l.plant.span = next().span;
            return l;
        }
        l.kind = Literal::Kind::StateRef;
        l.plant = ident("plant name, 'T' or 'F'");
        expect(Tok::Dot);
        l.state = ident("state name");
        return l;
    }

    std::vector<Token> toks_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

// Semantic validation ----------------------------------------------------------

class Validator {
public:
    explicit Validator(std::vector<Diagnostic>& diags) : diags_(diags) {}

    std::optional<ControlProblem> run(const std::vector<PlantDecl>& decls,
                                      const std::vector<ReqDecl>& reqs, bool syntax_ok)
    {
        std::vector<Automaton> plants;
        for (const auto& d : decls) {
            if (plant_index_.count(d.name.text)) {
                error(d.name.span, "E-DUP-PLANT", "plant '" + d.name.text + "' is already declared");
                continue;
            }
            plant_index_[d.name.text] = declared_.size();
            declared_.push_back(&d);
            if (auto a = plant(d))
                plants.push_back(std::move(*a));
            else
                plant_failed_ = true;
        }
        if (decls.empty() && syntax_ok)
            error(Span{}, "E-NO-PLANTS", "a model needs at least one plant");

        std::vector<StateEventInvariant> requirements;
        std::set<std::string> ids;
        for (const auto& r : reqs) {
            if (!ids.insert(r.id.text).second) {
                error(r.id.span, "E-DUP-REQ", "requirement '" + r.id.text + "' is already declared");
                continue;
            }
            if (auto inv = requirement(r))
                requirements.push_back(std::move(*inv));
        }

        if (errors_ > 0 || !syntax_ok)
            return std::nullopt;
        try {
            return ControlProblem(std::move(plants), std::move(requirements));
        } catch (const Error& e) {
            error(Span{}, "E-MODEL", e.what());
            return std::nullopt;
        }
    }

private:
    void error(Span s, std::string code, std::string msg)
    {
        ++errors_;
        diags_.push_back({Severity::Error, s, std::move(code), std::move(msg)});
    }

    std::optional<Automaton> plant(const PlantDecl& d)
    {
        std::size_t before = errors_;
        AutomatonBuilder b(d.name.text);
        std::map<std::string, StateIndex> states;
        for (const auto& s : d.states) {
            if (states.count(s.text)) {
                error(s.span, "E-DUP-STATE",
                      "state '" + s.text + "' is declared twice in plant '" + d.name.text + "'");
                continue;
            }
            states[s.text] = b.add_state(s.text);
        }
        auto state = [&](const Name& n) -> std::optional<StateIndex> {
            auto it = states.find(n.text);
            if (it == states.end()) {
                error(n.span, "E-UNKNOWN-STATE",
                      "plant '" + d.name.text + "' has no state '" + n.text + "'");
                return std::nullopt;
            }
            return it->second;
        };

        std::map<std::string, EventIndex> events;
        auto declare = [&](const Name& e, bool controllable) {
            if (events.count(e.text)) {
                error(e.span, "E-DUP-EVENT",
                      "event '" + e.text + "' is declared twice in plant '" + d.name.text + "'");
                return;
            }
            auto [it, fresh] = owner_.emplace(e.text, d.name.text);
            if (!fresh) {
                error(e.span, "E-EVENT-OWNER",
                      "event '" + e.text + "' is already declared in plant '" + it->second + "'");
                return;
            }
            event_flags_[e.text] = controllable;
            events[e.text] = b.add_event(e.text, controllable);
        };
        for (const auto& e : d.controllable)
            declare(e, true);
        for (const auto& e : d.uncontrollable)
            declare(e, false);
        if (d.controllable.empty() && d.uncontrollable.empty())
            error(d.name.span, "E-EMPTY-PLANT", "plant '" + d.name.text + "' declares no events");

        if (!d.initial) {
            error(d.name.span, "E-NO-INITIAL", "plant '" + d.name.text + "' has no initial state");
        } else if (auto s = state(*d.initial)) {
            b.set_initial(*s);
            if (!d.marked) {
                diags_.push_back({Severity::Info, d.name.span, "I-DEFAULT-MARKED",
                                  "plant '" + d.name.text + "' has no marked list; marking initial state '" +
                                      d.initial->text + "'"});
                b.set_marked(*s);
            }
        }
        if (d.marked)
            for (const auto& m : *d.marked)
                if (auto s = state(m))
                    b.set_marked(*s);

        std::map<std::pair<StateIndex, EventIndex>, StateIndex> delta;
        for (const auto& t : d.trans) {
            auto from = state(t.from);
            auto to = state(t.to);
            auto ev = events.find(t.event.text);
            if (ev == events.end()) {
                error(t.event.span, "E-UNKNOWN-EVENT",
                      "event '" + t.event.text + "' is not declared in plant '" + d.name.text + "'");
                continue;
            }
            if (!from || !to)
                continue;
            auto [it, fresh] = delta.emplace(std::pair{*from, ev->second}, *to);
            if (!fresh) {
                if (it->second != *to)
                    error(t.event.span, "E-NONDET",
                          "state '" + t.from.text + "' has two '" + t.event.text + "' transitions");
                else
                    diags_.push_back({Severity::Warning, t.event.span, "W-DUP-TRANS",
                                      "duplicate transition " + t.from.text + " - " + t.event.text +
                                          " -> " + t.to.text});
                continue;
            }
            b.add_transition(*from, ev->second, *to);
        }

        if (errors_ != before)
            return std::nullopt;
        try {
            return std::move(b).build();
        } catch (const Error& e) {
            error(d.name.span, "E-MODEL", e.what());
            return std::nullopt;
        }
    }

    std::optional<StateEventInvariant> requirement(const ReqDecl& r)
    {
        std::size_t before = errors_;
        auto flag = event_flags_.find(r.event.text);
        if (flag == event_flags_.end() && !plant_failed_)
            error(r.event.span, "E-UNKNOWN-EVENT",
                  "requirement '" + r.id.text + "' restricts undeclared event '" + r.event.text + "'");

        std::vector<Conjunction> dnf;
        for (const auto& conj : r.dnf) {
            Conjunction c;
            for (const auto& l : conj) {
                if (l.kind == Literal::Kind::True) {
                    c.push_back(Literal::truth());
                } else if (l.kind == Literal::Kind::False) {
                    c.push_back(Literal::falsity());
                } else {
                    auto p = plant_index_.find(l.plant.text);
                    if (p == plant_index_.end()) {
                        error(l.plant.span, "E-UNKNOWN-PLANT",
                              "requirement '" + r.id.text + "' refers to undeclared plant '" +
                                  l.plant.text + "'");
                    } else {
                        const auto& states = declared_[p->second]->states;
                        bool known = std::any_of(states.begin(), states.end(),
                                                 [&](const Name& n) { return n.text == l.state.text; });
                        if (!known)
                            error(l.state.span, "E-UNKNOWN-STATE",
                                  "plant '" + l.plant.text + "' has no state '" + l.state.text + "'");
                    }
                    c.push_back(Literal::ref(l.plant.text, l.state.text, l.negated));
                }
            }
            dnf.push_back(std::move(c));
        }
        if (errors_ != before || flag == event_flags_.end())
            return std::nullopt;
        return StateEventInvariant{r.id.text, Event{r.event.text, flag->second}, Condition(std::move(dnf))};
    }

    std::vector<Diagnostic>& diags_;
    std::size_t errors_ = 0;
    bool plant_failed_ = false;
    std::map<std::string, std::size_t> plant_index_;
    std::vector<const PlantDecl*> declared_;
    std::map<std::string, std::string> owner_;
    std::map<std::string, bool> event_flags_;
};

} // namespace

const char* to_string(Severity s)
{
    switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
    }
    return "?";
}

ParseResult parse_model(std::string_view text)
{
    ParseResult result;
    auto tokens = Lexer(text, result.diagnostics).run();
    bool lex_ok = result.diagnostics.empty();

    std::vector<PlantDecl> plants;
    std::vector<ReqDecl> reqs;
    Parser(std::move(tokens), result.diagnostics).run(plants, reqs);
    bool syntax_ok = lex_ok && result.diagnostics.empty();

    result.problem = Validator(result.diagnostics).run(plants, reqs, syntax_ok);
    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.span.offset < b.span.offset; });
    return result;
}

ParseResult parse_model_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult r;
        r.diagnostics.push_back(
            {Severity::Error, Span{}, "E-IO", "cannot read '" + path.string() + "'"});
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string format_diagnostic(const Diagnostic& d, std::string_view origin)
{
    std::ostringstream out;
    out << origin << ':' << d.span.line << ':' << d.span.column << ": " << to_string(d.severity)
        << '[' << d.code << "]: " << d.message;
    return out.str();
}

std::string format_identifier(std::string_view id)
{
    bool plain = !id.empty() && std::all_of(id.begin(), id.end(), is_word_char) &&
                 std::find(kKeywords.begin(), kKeywords.end(), id) == kKeywords.end();
    if (plain)
        return std::string(id);
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace decsynth
