// LP file dialect: deterministic export, import of hand-written files, and
// solve-equivalence across a round trip.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <string>

#include "hm/instances.hpp"
#include "hm/ip_model.hpp"
#include "hm/solver.hpp"

using namespace hm;

namespace {

std::map<std::string, const LinRow*> rows_by_name(const IlpModel& m) {
    std::map<std::string, const LinRow*> out;
    for (const auto& r : m.rows) out[r.name] = &r;
    return out;
}

std::map<std::string, double> named_terms(const IlpModel& m, const LinRow& r) {
    std::map<std::string, double> out;
    for (const auto& t : r.terms) out[m.vars[t.var].name] += t.coef;
    return out;
}

}  // namespace

TEST_CASE("export structure and determinism") {
    const Market m = fixture("example1").market;
    const IlpModel model = build_model(m, {Concept::Core, std::nullopt, Objective::max_size()});
    const std::string text = export_lp(model);

    CHECK(text.rfind("Maximize\n obj:", 0) == 0);
    CHECK(text.find("Subject To\n") != std::string::npos);
    CHECK(text.find("Bounds\n") != std::string::npos);
    CHECK(text.find("Generals\n") != std::string::npos);   // price variables
    CHECK(text.find("Binaries\n") != std::string::npos);   // edge variables
    CHECK(text.find(" 1 <= p_1 <= 6\n") != std::string::npos);
    CHECK(text.compare(text.size() - 4, 4, "End\n") == 0);

    CHECK(export_lp(model) == text);  // byte-identical re-export

    IlpModel min_model = model;
    min_model.stages[0].maximize = false;
    CHECK(export_lp(min_model).rfind("Minimize", 0) == 0);
}

TEST_CASE("import of a hand-written file") {
    const std::string text =
        "\\ a comment line\n"
        "Maximize\n"
        " obj: 2 x + y - 0.5 z\n"
        "Subject To\n"
        " cap: x + y + z <= 2\n"
        " tie: x - y = 0\n"
        " floor: y + 2 z >= 1\n"
        "Binaries\n"
        " x\n y\n z\n"
        "End\n";
    const IlpModel model = import_lp(text);

    REQUIRE(model.vars.size() == 3);
    REQUIRE(model.rows.size() == 3);
    REQUIRE(model.stages.size() == 1);
    CHECK(model.stages[0].maximize);

    const auto rows = rows_by_name(model);
    CHECK(named_terms(model, *rows.at("cap")) ==
          std::map<std::string, double>{{"x", 1}, {"y", 1}, {"z", 1}});
    CHECK(rows.at("cap")->sense == RowSense::LE);
    CHECK(rows.at("cap")->rhs == doctest::Approx(2));
    CHECK(named_terms(model, *rows.at("tie")) == std::map<std::string, double>{{"x", 1}, {"y", -1}});
    CHECK(rows.at("tie")->sense == RowSense::EQ);
    CHECK(rows.at("floor")->sense == RowSense::GE);

    // optimum: x = y = 1 (objective 3); z would cost 0.5 and break the cap
    const SolveResult r = solve(model);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("integer variables recover their bounds from the bounds section") {
    const std::string text =
        "Maximize\n obj: q\nSubject To\n pin: q - 3 b <= 1\nBounds\n 1 <= q <= 5\n"
        "Generals\n q\nBinaries\n b\nEnd\n";
    const IlpModel model = import_lp(text);
    const int q = model.var_index("q");
    CHECK(model.vars[q].kind == VarKind::Integer);
    CHECK(model.vars[q].lb == 1);
    CHECK(model.vars[q].ub == 5);

    const SolveResult r = solve(model);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(4.0));  // b = 1, q = 4
}

TEST_CASE("round trip preserves solve results across formulations") {
    const Market m = fixture("example1").market;
    const std::vector<Formulation> forms = {
        {Concept::None, std::nullopt, Objective::max_size()},
        {Concept::Core, std::nullopt, Objective::max_size()},
        {Concept::Core, std::nullopt, Objective::max_weight()},
        {Concept::Competitive, std::nullopt, Objective::max_size()},
        {Concept::StrongCore, std::nullopt, Objective::max_size()},
        {Concept::Core, 2, Objective::max_size()},
        {Concept::StrongCore, 3, Objective::max_weight()},
    };
    for (const auto& f : forms) {
        const IlpModel original = build_model(m, f);
        const IlpModel back = import_lp(export_lp(original));
        REQUIRE(original.vars.size() == back.vars.size());
        REQUIRE(original.rows.size() == back.rows.size());

        const SolveResult a = solve(original);
        const SolveResult b = solve(back);
        CHECK(a.status == b.status);
        if (a.status == SolveStatus::Optimal) CHECK(a.objective == doctest::Approx(b.objective));
    }
}

TEST_CASE("round trip preserves every row exactly") {
    const Market m = fixture("example1").market;
    const IlpModel original = build_model(m, {Concept::Competitive, std::nullopt, {}});
    const IlpModel back = import_lp(export_lp(original));

    const auto orig_rows = rows_by_name(original);
    const auto back_rows = rows_by_name(back);
    REQUIRE(orig_rows.size() == back_rows.size());
    for (const auto& [name, row] : orig_rows) {
        REQUIRE(back_rows.count(name) == 1);
        const LinRow* other = back_rows.at(name);
        CHECK(row->sense == other->sense);
        CHECK(row->rhs == doctest::Approx(other->rhs));
        CHECK(named_terms(original, *row) == named_terms(back, *other));
    }
}

TEST_CASE("tiny weight coefficients survive the round trip") {
    Market m = market_from_tiers(2, {{{2}}, {{1}}});
    m.weight[{0, 1}] = 5.5e-06;
    m.weight[{1, 0}] = 1.0 - 1e-12;
    const IlpModel original = build_model(m, {Concept::None, std::nullopt, Objective::max_weight()});
    const IlpModel back = import_lp(export_lp(original));

    const SolveResult a = solve(original);
    const SolveResult b = solve(back);
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
}

TEST_CASE("only the primary stage is written to an LP file") {
    const Market m = fixture("example1").market;
    IlpModel model = build_model(m, {Concept::Core, std::nullopt, Objective::max_size()});
    model = set_objective(std::move(model), m, Objective::best_for(0));
    REQUIRE(model.stages.size() == 2);
    const IlpModel back = import_lp(export_lp(model));
    CHECK(back.stages.size() == 1);
}
