#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "betafam/archive.hpp"
#include "betafam/chart.hpp"
#include "betafam/claims.hpp"
#include "betafam/config.hpp"

using namespace betafam;

namespace {

/* small shared runs: wide enough for the stems the cases below inspect */
struct Fixture {
    TmfRun tmf;
    J2Run j2;
};

const Fixture& fx() {
    static Fixture f = [] {
        Fixture out;
        TmfConfig tcfg;
        tcfg.hi = 40;
        tcfg.rules = default_tmf_rules();
        out.tmf = run_tmf(tcfg);
        J2Config jcfg;
        jcfg.hi = 36;
        jcfg.rules = default_tmf_rules();
        out.j2 = run_j2(out.tmf.run.e2(), jcfg);
        return out;
    }();
    return f;
}

int count(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("tmf chart draws rectangles, dots and multiplication lines") {
    ChartStyle st;
    st.max_f = 4;
    std::string svg = emit_chart(fx().tmf.run.e2(), 0, 16, st);

    /* one windowed j-tower rectangle per nonempty filtration-0 slice */
    CHECK(count(svg, "Z[j] @") == 5);
    CHECK(svg.find("Z[j] @(0,0) rank 7") != std::string::npos);

    /* F3 dots at the torsion monomials of the strip, all lifted (blue) */
    CHECK(svg.find("α @(3,1)") != std::string::npos);
    CHECK(svg.find("β @(10,2)") != std::string::npos);
    CHECK(svg.find("α β @(13,3)") != std::string::npos);
    CHECK(count(svg, "r=\"3\"") == 3);

    /* a TMF chart has no boundary classes */
    CHECK(svg.find("#c0392b") == std::string::npos);
    CHECK(svg.find("#d4a017") == std::string::npos);
    CHECK(svg.find("∂(") == std::string::npos);

    /* α- and β-multiplications with both endpoints visible:
     *   α: (0,0)->(3,1), (10,2)->(13,3);  β: (0,0)->(10,2), (3,1)->(13,3) */
    CHECK(count(svg, "class=\"mult-alpha\"") == 2);
    CHECK(count(svg, "class=\"mult-beta\"") == 2);

    /* byte-identical re-emission */
    CHECK(emit_chart(fx().tmf.run.e2(), 0, 16, st) == svg);
}

TEST_CASE("tmf chart draws d5 arrows with slope (-1,+5)") {
    const Page& p = fx().tmf.run.pages.front(); /* E2 with d5 installed */
    REQUIRE(p.dr == 5);
    std::string svg = emit_chart(p, 20, 30);

    /* the only visible d5 in this strip is Δ -> α β^2 at (24,0) -> (23,5) */
    CHECK(count(svg, "marker-end") == 1);
    CHECK(svg.find("<line class=\"d5\" x1=\"100\" y1=\"244\" x2=\"84\" y2=\"164\" "
                   "marker-end=\"url(#arr)\"/>") != std::string::npos);
}

TEST_CASE("j2 chart follows the boundary legend") {
    const Page& e2 = fx().j2.run.e2();
    std::string svg = emit_chart(e2, 0, 36);

    /* blue lifts, red torsion boundaries, yellow image-of-J circles */
    CHECK(svg.find("α @(3,1)") != std::string::npos);
    CHECK(svg.find("∂(α) @(2,2)") != std::string::npos);
    CHECK(svg.find("∂(c4) @(7,1) order 3^1") != std::string::npos);
    CHECK(svg.find("∂(Δ) @(23,1) order 3^2") != std::string::npos);
    CHECK(svg.find("α Δ @(27,1)") != std::string::npos);
    CHECK(svg.find("∂(α Δ) @(26,2)") != std::string::npos);

    /* one glyph per generator: the order-3 circles at stem 7 are the seven
     * boundary images of the weight-4 lattice, stem 23 carries eight of
     * order 9, and the lone rectangle is the j-tower at the origin */
    CHECK(count(svg, "@(7,1)") == 7);
    CHECK(count(svg, "@(23,1)") == 8);
    CHECK(count(svg, "Z[j] @") == 1);
    CHECK(svg.find("Z[j] @(0,0) rank 7") != std::string::npos);

    CHECK(emit_chart(e2, 0, 36) == svg);
}

TEST_CASE("multiplication lines with yellow source are omitted") {
    std::string svg = emit_chart(fx().j2.run.e2(), 20, 30);

    /* ∂(Δ) at (23,1) is yellow and ∂(α Δ) exists at (26,2), so an α-line
     * between them would be drawn if yellow sources were not skipped; the
     * α-lines in the strip start at β^2, ∂(β^5 Δ^-1) and β^5 Δ^-1, the
     * single β-line at β^2 — all blue or red sources */
    CHECK(svg.find("∂(Δ) @(23,1)") != std::string::npos);
    CHECK(svg.find("∂(α Δ) @(26,2)") != std::string::npos);
    CHECK(svg.find("β^5 Δ^-1 @(26,10)") != std::string::npos);
    CHECK(svg.find("α β^5 Δ^-1 @(29,11)") != std::string::npos);
    CHECK(count(svg, "class=\"mult-alpha\"") == 3);
    CHECK(count(svg, "class=\"mult-beta\"") == 1);

    /* no multiplication line starts on the yellow f = 1 row (y = 228) */
    for (size_t p = svg.find("class=\"mult-"); p != std::string::npos;
         p = svg.find("class=\"mult-", p + 1)) {
        std::string line = svg.substr(p, svg.find('\n', p) - p);
        CHECK(line.find("y1=\"228\"") == std::string::npos);
    }

    /* the boundary d5 ∂(Δ) -> ∂(α β^2) is still drawn as an arrow */
    CHECK(svg.find("∂(α β^2) @(22,6)") != std::string::npos);
    CHECK(count(svg, "marker-end") == 1);
}

TEST_CASE("empty page renders a bare grid") {
    Page p;
    p.lo = 0;
    p.hi = 20;
    std::string svg = emit_chart(p, 0, 20);
    CHECK(svg.find("<svg ") != std::string::npos);
    CHECK(svg.find("<title>") == std::string::npos);
    CHECK(svg.find("marker-end=") == std::string::npos);
    CHECK(count(svg, "class=\"mult-alpha\"") == 0);
    CHECK(emit_chart(p, 0, 20) == svg);
}

TEST_CASE("archive round trip is lossless") {
    const Run& run = fx().tmf.run;
    std::string text = save_run(run, 0, fx().tmf.cfg.rules);
    PageArchive ar = load_run(text);

    CHECK(ar.k == 0);
    CHECK(ar.note.empty());
    CHECK(ar.rules.size() == 2);
    CHECK(ar.rules[0].name == "d5");
    CHECK(ar.run.pages.size() == run.pages.size());
    CHECK(ar.run.nontrivial_turns == run.nontrivial_turns);

    /* structural equality, certified by byte-identical re-serialization */
    CHECK(save_run(ar.run, ar.k, ar.rules) == text);

    /* charts from the loaded pages match charts from the live pages */
    CHECK(emit_chart(ar.run.e2(), 0, 16) == emit_chart(run.e2(), 0, 16));
    CHECK(emit_chart(ar.run.einf(), 0, 40) == emit_chart(run.einf(), 0, 40));

    /* page slices carry labels and relations through verbatim */
    const PageSlice* live = run.e2().find({10, 2});
    const PageSlice* loaded = ar.run.e2().find({10, 2});
    REQUIRE(live != nullptr);
    REQUIRE(loaded != nullptr);
    CHECK(loaded->slice.labels == live->slice.labels);
    CHECK(loaded->slice.shape() == live->slice.shape());
}

TEST_CASE("archive rejects version and checksum tampering") {
    std::string text = save_run(fx().j2.run, fx().j2.cfg.k, fx().j2.cfg.rules);

    /* bad first line: wrong magic or unsupported version */
    {
        std::string other = "betafam-pages 2" + text.substr(text.find('\n'));
        CHECK_THROWS_AS((void)load_run(other), FormatVersionMismatch);
        CHECK_THROWS_AS((void)load_run("not-an-archive\n"), FormatVersionMismatch);
    }
    /* truncation loses the checksum line */
    CHECK_THROWS_AS((void)load_run(text.substr(0, text.size() / 2)), ChecksumFailure);
    /* a flipped byte in the body fails the checksum */
    {
        std::string bent = text;
        size_t pos = bent.find("label");
        REQUIRE(pos != std::string::npos);
        bent[pos] = 'x';
        CHECK_THROWS_AS((void)load_run(bent), ChecksumFailure);
    }
    /* a missing checksum line is indistinguishable from truncation */
    {
        std::string headless = text.substr(0, text.rfind("checksum"));
        headless = headless.substr(0, headless.rfind('\n') + 1);
        CHECK_THROWS_AS((void)load_run(headless), ChecksumFailure);
    }
}

TEST_CASE("range-restricted load records the restriction") {
    std::string text = save_run(fx().j2.run, fx().j2.cfg.k, fx().j2.cfg.rules);

    PageArchive ar = load_run(text, 0, 20);
    CHECK(ar.note == "restricted to [0,20] from [0,36]");
    CHECK(ar.run.e2().lo == 0);
    CHECK(ar.run.e2().hi == 20);
    CHECK(ar.run.e2().find({26, 2}) == nullptr); /* beyond hi + margin */

    /* slices inside the kept range are untouched */
    const PageSlice* live = fx().j2.run.e2().find({10, 2});
    const PageSlice* kept = ar.run.e2().find({10, 2});
    REQUIRE(live != nullptr);
    REQUIRE(kept != nullptr);
    CHECK(kept->slice.labels == live->slice.labels);

    /* verdicts outside the narrowed certified range become undecidable */
    const PageSlice* e2s = ar.run.e2().find({22, 2});
    CHECK(e2s == nullptr);
    Vec probe = Vec::Zero(1);
    probe(0) = LocalInt(1);
    TorsionVerdict v = torsion_order(ar.run, {22, 2}, probe);
    CHECK(v.kind == TorsionVerdict::Kind::Undecidable);

    /* a request covering the stored range loads verbatim */
    PageArchive full = load_run(text, 0, 200);
    CHECK(full.note.empty());
    CHECK(save_run(full.run, full.k, full.rules) == text);
}

TEST_CASE("archive files publish atomically and flag absence") {
    namespace fsys = std::filesystem;
    fsys::path dir = fsys::temp_directory_path() / "betafam-archive-test";
    fsys::path file = dir / "tmf.pages";
    fsys::remove_all(dir);

    CHECK_THROWS_AS((void)load_run_file(file), MissingArchive);

    save_run_file(file, fx().tmf.run, 0, fx().tmf.cfg.rules);
    CHECK(!fsys::exists(file.string() + ".tmp"));
    PageArchive ar = load_run_file(file);
    CHECK(save_run(ar.run, ar.k, ar.rules) == save_run(fx().tmf.run, 0, fx().tmf.cfg.rules));

    PageArchive cut = load_run_file(file, 0, 20);
    CHECK(cut.note == "restricted to [0,20] from [0,40]");
    fsys::remove_all(dir);
}

TEST_CASE("claims replay from serialized pages is byte-identical") {
    TmfConfig tcfg;
    tcfg.hi = 104;
    tcfg.rules = default_tmf_rules();
    TmfRun tmf = run_tmf(tcfg);
    J2Config jcfg;
    jcfg.hi = 100;
    jcfg.rules = default_tmf_rules();
    J2Run j2 = run_j2(tmf.run.e2(), jcfg);

    ClaimGrid grid;
    grid.stem_cap = 100;
    std::vector<Claim> suite = build_claim_suite(grid);
    REQUIRE(!suite.empty());
    std::vector<AdmissibilityClause> clauses = default_admissibility();
    VanishingLedger ledger = default_vanishing_ledger();
    ClaimReport live = verify_claims(suite, tmf, j2, clauses, ledger);
    CHECK(live.all_expected_verified());

    /* serialize both runs, reload, and re-verify the same suite */
    PageArchive tar = load_run(save_run(tmf.run, 0, tcfg.rules));
    PageArchive jar = load_run(save_run(j2.run, jcfg.k, jcfg.rules));
    TmfRun tmf2;
    tmf2.cfg = tcfg;
    tmf2.run = tar.run;
    J2Run j22;
    j22.cfg = jcfg;
    j22.cfg.k = jar.k;
    j22.run = jar.run;
    ClaimReport replay = verify_claims(suite, tmf2, j22, clauses, ledger);

    CHECK(replay.str() == live.str());
}

TEST_CASE("shipped config files reproduce the built-in defaults") {
    const std::string dir = BETAFAM_CONFIG_DIR;

    std::vector<DifferentialRule> rules = load_rules(dir + "/tmf_differentials.txt");
    std::vector<DifferentialRule> builtin = default_tmf_rules();
    REQUIRE(rules.size() == builtin.size());
    for (size_t i = 0; i < rules.size(); ++i) {
        CHECK(rules[i].name == builtin[i].name);
        CHECK(rules[i].page == builtin[i].page);
        CHECK(rules[i].source == builtin[i].source);
        REQUIRE(rules[i].value.terms().size() == builtin[i].value.terms().size());
        auto it = rules[i].value.terms().begin();
        auto jt = builtin[i].value.terms().begin();
        for (; it != rules[i].value.terms().end(); ++it, ++jt) {
            CHECK(it->first == jt->first);
            CHECK(it->second == jt->second);
        }
    }

    std::vector<AdmissibilityClause> adm = parse_admissibility(read_file(dir + "/mrw_admissibility.txt"));
    std::vector<AdmissibilityClause> adm0 = default_admissibility();
    REQUIRE(adm.size() == adm0.size());
    for (size_t i = 0; i < adm.size(); ++i) {
        CHECK(adm[i].stem_mod_144 == adm0[i].stem_mod_144);
        CHECK(adm[i].j_mod_36 == adm0[i].j_mod_36);
        CHECK(adm[i].min_n == adm0[i].min_n);
        CHECK(adm[i].citation == adm0[i].citation);
    }

    VanishingLedger led = parse_vanishing_ledger(read_file(dir + "/vanishing_ledger.txt"));
    VanishingLedger led0 = default_vanishing_ledger();
    REQUIRE(led.entries.size() == led0.entries.size());
    for (size_t i = 0; i < led.entries.size(); ++i) {
        CHECK(led.entries[i].key == led0.entries[i].key);
        CHECK(led.entries[i].statement == led0.entries[i].statement);
        CHECK(led.entries[i].torsion == led0.entries[i].torsion);
        CHECK(led.entries[i].citation == led0.entries[i].citation);
    }

    RunConfig def = load_config(dir + "/default.json");
    CHECK(def.lo == 0);
    CHECK(def.hi == 200);
    CHECK(def.window.lo == -6);
    CHECK(def.window.hi == 18);
    CHECK(def.k == 2);
    CHECK(def.grid.param_hi == 1);
    CHECK(def.grid.stem_cap == 400);

    RunConfig claims = load_config(dir + "/claims.json");
    CHECK(claims.lo == 0);
    CHECK(claims.hi == 400);
    CHECK(claims.window.lo == -9);
    CHECK(claims.window.hi == 21);
}
