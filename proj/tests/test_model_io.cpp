#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "decsynth/model_io.hpp"
#include "support.hpp"

using namespace decsynth;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> codes(const ParseResult& r)
{
    std::vector<std::string> out;
    for (const auto& d : r.diagnostics)
        out.push_back(d.code);
    return out;
}

bool has_code(const ParseResult& r, const std::string& code)
{
    auto c = codes(r);
    return std::find(c.begin(), c.end(), code) != c.end();
}

void check_spans(const ParseResult& r, std::string_view text)
{
    for (const auto& d : r.diagnostics) {
        CHECK(d.span.offset <= text.size());
        CHECK(d.span.offset + d.span.length <= text.size());
        CHECK(d.span.line >= 1);
        CHECK(d.span.column >= 1);
    }
}

const char* kMinimal = R"(plant P {
  states x y
  marked x
  initial x
  controllable a
  uncontrollable b
  trans x - a -> y
  trans y - b -> x
}
)";

} // namespace

TEST_CASE("every fixture round-trips through the printer")
{
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(DECSYNTH_FIXTURE_DIR)) {
        if (entry.path().extension() != ".dcp" || entry.path().stem() == "malformed")
            continue;
        CAPTURE(entry.path().string());
        auto text = slurp(entry.path());
        auto first = parse_model(text);
        REQUIRE(first.ok());
        auto printed = pretty_print(*first.problem);
        auto second = parse_model(printed);
        REQUIRE(second.ok());
        CHECK(*second.problem == *first.problem);
        CHECK(pretty_print(*second.problem) == printed);
        ++n;
    }
    CHECK(n >= 13);
}

TEST_CASE("the malformed fixture reports every problem")
{
    auto text = slurp(testsupport::fixture_path("malformed.dcp"));
    auto r = parse_model(text);
    CHECK_FALSE(r.ok());
    CHECK(has_code(r, "E-UNKNOWN-STATE"));
    CHECK(has_code(r, "E-NONDET"));
    CHECK(has_code(r, "E-UNKNOWN-PLANT"));
    // event checks on requirements are skipped once a plant failed
    CHECK_FALSE(has_code(r, "E-UNKNOWN-EVENT"));
    check_spans(r, text);
    // sorted by position
    for (std::size_t i = 1; i < r.diagnostics.size(); ++i)
        CHECK(r.diagnostics[i - 1].span.offset <= r.diagnostics[i].span.offset);
    auto nondet = std::find_if(r.diagnostics.begin(), r.diagnostics.end(),
                               [](const Diagnostic& d) { return d.code == "E-NONDET"; });
    CHECK(nondet->span.line == 6);
}

TEST_CASE("diagnostic codes")
{
    struct Case {
        const char* text;
        const char* code;
    };
    Case cases[] = {
        {"plant P { states x initial x controllable a } plant P { states x initial x controllable b }", "E-DUP-PLANT"},
        {"plant P { states x x initial x controllable a }", "E-DUP-STATE"},
        {"plant P { states x initial x controllable a a }", "E-DUP-EVENT"},
        {"plant P { states x initial x controllable a } plant Q { states y initial y uncontrollable a }", "E-EVENT-OWNER"},
        {"plant P { states x initial x }", "E-EMPTY-PLANT"},
        {"plant P { initial x controllable a }", "E-SYNTAX"},
        {"plant P { states x controllable a }", "E-NO-INITIAL"},
        {"requirement R: a needs T", "E-NO-PLANTS"},
        {"plant P { states x initial x controllable a } requirement R: a needs T requirement R: a needs F", "E-DUP-REQ"},
        {"plant P { states x initial x controllable a } requirement R { states r }", "E-REQ-AUT"},
        {"plant P { states x initial x controllable a trans x - zz -> x }", "E-UNKNOWN-EVENT"},
        {"plant P { states x initial x controllable a trans x - a -> q }", "E-UNKNOWN-STATE"},
        {"plant P { states x initial x controllable a } requirement R: a needs P.nope", "E-UNKNOWN-STATE"},
        {"plant P { states x initial x controllable a } requirement R: a needs Q.x", "E-UNKNOWN-PLANT"},
        {"plant P { states x initial x controllable a } requirement R: zz needs P.x", "E-UNKNOWN-EVENT"},
        {"plant P { states x initial x controllable a } #", "E-LEX"},
        {"plant P { states x initial x controllable a } \"open", "E-LEX"},
        {"plant { }", "E-SYNTAX"},
        {"plant P { states x initial x controllable a } requirement R: a needs not T", "E-SYNTAX"},
    };
    for (const auto& c : cases) {
        std::string text = c.text;
        CAPTURE(text);
        auto r = parse_model(c.text);
        CHECK_FALSE(r.ok());
        CHECK(has_code(r, c.code));
        check_spans(r, c.text);
    }
}

TEST_CASE("warnings and info do not fail a parse")
{
    auto dup = parse_model("plant P { states x initial x controllable a trans x - a -> x trans x - a -> x }");
    CHECK(dup.ok());
    CHECK(has_code(dup, "W-DUP-TRANS"));
    CHECK(has_code(dup, "I-DEFAULT-MARKED"));
    REQUIRE(dup.ok());
    CHECK(dup.problem->plant(0).is_marked(0));

    auto explicit_empty = parse_model("plant P { states x marked initial x controllable a }");
    REQUIRE(explicit_empty.ok());
    CHECK_FALSE(explicit_empty.problem->plant(0).is_marked(0));
    CHECK_FALSE(has_code(explicit_empty, "I-DEFAULT-MARKED"));
}

TEST_CASE("CRLF, comments and quoted identifiers")
{
    std::string crlf;
    for (char ch : std::string(kMinimal)) {
        if (ch == '\n')
            crlf += '\r';
        crlf += ch;
    }
    auto a = parse_model(crlf), b = parse_model(kMinimal);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(*a.problem == *b.problem);

    auto q = parse_model("// comment\nplant \"plant one\" { states \"needs\" \"x y\" initial \"needs\" "
                         "controllable \"not\" trans \"needs\" - \"not\" -> \"x y\" }\n"
                         "requirement R: \"not\" needs \"plant one\".\"x y\"");
    REQUIRE(q.ok());
    const auto& p = q.problem->plant(0);
    CHECK(p.name() == "plant one");
    CHECK(p.step("needs", "not") == std::optional<std::string>("x y"));
    auto printed = pretty_print(*q.problem);
    auto again = parse_model(printed);
    REQUIRE(again.ok());
    CHECK(*again.problem == *q.problem);
    CHECK(format_identifier("needs") == "\"needs\"");
    CHECK(format_identifier("q1") == "q1");
    CHECK(format_identifier("a\"b") == "\"a\\\"b\"");
}

TEST_CASE("printing requirements")
{
    auto cp = testsupport::load_fixture("fig6.dcp");
    auto text = pretty_print(cp);
    CHECK(text.find("requirement R5: j needs P2.q4 or P3.q6\n") != std::string::npos);
    auto fig3 = pretty_print(testsupport::load_fixture("fig3.dcp"));
    CHECK(fig3.find("mu needs P2.q1 or not P3.q1") != std::string::npos);
}

TEST_CASE("diagnostic formatting")
{
    Diagnostic d{Severity::Error, {3, 7, 40, 2}, "E-NONDET", "boom"};
    CHECK(format_diagnostic(d, "m.dcp") == "m.dcp:3:7: error[E-NONDET]: boom");
}

TEST_CASE("missing file")
{
    auto r = parse_model_file("/nonexistent/model.dcp");
    CHECK_FALSE(r.ok());
    CHECK(has_code(r, "E-IO"));
}

TEST_CASE("fuzz corpus never crashes the parser")
{
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(DECSYNTH_FUZZ_CORPUS_DIR)) {
        CAPTURE(entry.path().string());
        auto text = slurp(entry.path());
        auto r = parse_model(text);
        CHECK((r.ok() || !r.diagnostics.empty()));
        check_spans(r, text);
        if (r.ok()) {
            auto again = parse_model(pretty_print(*r.problem));
            REQUIRE(again.ok());
            CHECK(*again.problem == *r.problem);
        }
        ++n;
    }
    CHECK(n > 0);
}
