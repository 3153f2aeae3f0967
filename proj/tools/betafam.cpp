#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "betafam/archive.hpp"
#include "betafam/chart.hpp"
#include "betafam/claims.hpp"
#include "betafam/config.hpp"

namespace fs = std::filesystem;
using namespace betafam;

namespace {

/* "A..B" with either end possibly negative */
std::pair<int, int> parse_span(const std::string& s, const char* flag) {
    size_t dots = s.find("..");
    if (dots == std::string::npos)
        throw ConfigError(std::string(flag) + " wants the form A..B, got '" + s + "'");
    try {
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ConfigError(std::string(flag) + " wants integers A..B, got '" + s + "'");
    }
}

struct Overrides {
    std::string config, range, window, out, grid;
    std::optional<int> k;
};

RunConfig effective_config(const Overrides& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.range.empty()) std::tie(c.lo, c.hi) = parse_span(o.range, "--range");
    if (!o.window.empty()) std::tie(c.window.lo, c.window.hi) = parse_span(o.window, "--window");
    if (o.k) c.k = *o.k;
    if (!o.out.empty()) c.out = o.out;
    if (!o.grid.empty()) {
        /* N or N,CAP: parameter bound for every family index, optional stem cap */
        size_t comma = o.grid.find(',');
        try {
            c.grid.param_hi = std::stoi(o.grid.substr(0, comma));
            if (comma != std::string::npos) c.grid.stem_cap = std::stoi(o.grid.substr(comma + 1));
        } catch (const std::exception&) {
            throw ConfigError("--grid wants N or N,CAP, got '" + o.grid + "'");
        }
    }
    c.validate();
    return c;
}

fs::path e2_path(const RunConfig& c, const std::string& target) {
    return fs::path(c.out) / (target + "_e2.pages");
}
fs::path pages_path(const RunConfig& c, const std::string& target) {
    return fs::path(c.out) / (target + "_pages.pages");
}

void print_dimension_table(const Page& e2, const std::string& target) {
    std::cout << "# " << target << " E2 dimensions, stems [" << e2.lo << "," << e2.hi
              << "], Δ-window " << e2.window.str() << "\n";
    std::cout << "s f dim\n";
    long long gens = 0, slices = 0;
    for (const auto& [bd, ps] : e2.slices) {
        if (bd.s < e2.lo || bd.s > e2.hi || ps.slice.n() == 0) continue;
        std::cout << bd.s << ' ' << bd.f << ' ' << ps.slice.n() << "\n";
        gens += ps.slice.n();
        ++slices;
    }
    std::cout << "total: " << gens << " generators in " << slices << " bidegrees\n";
}

int cmd_build(const std::string& target, const RunConfig& cfg) {
    std::vector<DifferentialRule> rules = cfg.rules();
    Run shell;
    int k = 0;
    if (target == "tmf") {
        shell.pages.push_back(build_tmf_e2(cfg.tmf()));
    } else {
        auto [page, asmb] = build_j2_e2(build_tmf_e2(cfg.tmf()), cfg.j2());
        (void)asmb;
        shell.pages.push_back(std::move(page));
        k = cfg.k;
    }
    save_run_file(e2_path(cfg, target), shell, k, rules);
    print_dimension_table(shell.e2(), target);
    std::cout << "wrote " << e2_path(cfg, target).string() << "\n";
    return 0;
}

/* rebuild the run from the parameters recorded in the E2 archive, so the
 * output depends on the archive alone and not on the current flags */
int cmd_run(const std::string& target, const RunConfig& cfg) {
    fs::path src = e2_path(cfg, target);
    if (!fs::exists(src))
        throw MissingArchive("no archive at " + src.string() + "; run 'betafam build " + target +
                             "' first");
    PageArchive ar = load_run_file(src);
    const Page& e2 = ar.run.e2();
    Run run;
    if (target == "tmf") {
        std::set<int> pages;
        for (const DifferentialRule& r : ar.rules) pages.insert(r.page);
        std::vector<Turn> turns;
        for (int r : pages) turns.push_back({r, tmf_formula(ar.rules, r)});
        run = run_pages(e2, turns);
    } else {
        J2Config jcfg;
        jcfg.lo = e2.lo;
        jcfg.hi = e2.hi;
        jcfg.window = e2.window;
        jcfg.k = ar.k;
        jcfg.rules = ar.rules;
        jcfg.margin = e2.margin;
        TmfConfig tcfg;
        tcfg.lo = jcfg.lo;
        tcfg.hi = jcfg.hi;
        tcfg.window = jcfg.window;
        tcfg.rules = ar.rules;
        tcfg.margin = jcfg.margin + 1;
        run = run_j2(build_tmf_e2(tcfg), jcfg).run;
    }
    save_run_file(pages_path(cfg, target), run, ar.k, ar.rules);
    std::cout << target << ": " << run.pages.size() << " pages stored";
    std::cout << "; nontrivial differentials:";
    for (int r : run.nontrivial_turns) std::cout << " d" << r;
    if (run.nontrivial_turns.empty()) std::cout << " none";
    std::cout << "\nwrote " << pages_path(cfg, target).string() << "\n";
    return 0;
}

int cmd_chart(const std::string& target, const RunConfig& cfg, int page_r) {
    fs::path src = pages_path(cfg, target);
    if (!fs::exists(src)) src = e2_path(cfg, target);
    if (!fs::exists(src))
        throw MissingArchive("no archive for '" + target + "' under " + cfg.out +
                             "; run 'betafam build " + target + "' first");
    int lo = cfg.lo, hi = cfg.hi;
    PageArchive ar = load_run_file(src);
    const Page& page = ar.run.page_at(page_r);
    if (page.r < page_r && ar.run.pages.size() == 1)
        throw MissingArchive("archive " + src.string() + " only holds E2; run 'betafam run " +
                             target + "' first");
    std::string svg = emit_chart(page, lo, hi, cfg.style);
    fs::path dst = fs::path(cfg.out) / ("chart_" + target + "_p" + std::to_string(page.r) + "_" +
                                        std::to_string(lo) + "_" + std::to_string(hi) + ".svg");
    atomic_write_file(dst, svg);
    std::cout << "wrote " << dst.string() << " (page E" << page.r << ", stems " << lo << ".."
              << hi << ")\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    for (const char* t : {"tmf", "j2"})
        if (!fs::exists(pages_path(cfg, t)))
            throw MissingArchive("no archive at " + pages_path(cfg, t).string() +
                                 "; run 'betafam build " + t + "' and 'betafam run " + t +
                                 "' first");
    PageArchive tar = load_run_file(pages_path(cfg, "tmf"));
    PageArchive jar = load_run_file(pages_path(cfg, "j2"));
    TmfRun tmf;
    tmf.run = std::move(tar.run);
    tmf.cfg.rules = tar.rules;
    J2Run j2;
    j2.run = std::move(jar.run);
    j2.cfg.k = jar.k;
    j2.cfg.rules = jar.rules;

    std::vector<Claim> suite = build_claim_suite(cfg.grid);
    VanishingLedger ledger = cfg.ledger();
    ClaimReport report =
        verify_claims(suite, tmf, j2, cfg.admissibility(), ledger, /*throw_on_undecidable=*/false);

    atomic_write_file(fs::path(cfg.out) / "claims.txt", report.str());
    atomic_write_file(fs::path(cfg.out) / "theorems.txt",
                      theorem_summary(assemble_theorems(report, ledger)));

    int verified = 0, refuted = 0, open = 0, undecidable = 0;
    int need_hi = tmf.run.e2().hi;
    for (const ClaimOutcome& o : report.outcomes) {
        switch (o.status) {
            case ClaimOutcome::Status::Verified: ++verified; break;
            case ClaimOutcome::Status::Refuted: ++refuted; break;
            case ClaimOutcome::Status::Open: ++open; break;
            case ClaimOutcome::Status::Undecidable: ++undecidable; break;
        }
        if (o.status == ClaimOutcome::Status::Refuted ||
            o.status == ClaimOutcome::Status::Undecidable) {
            std::cout << o.str() << "\n";
            need_hi = std::max(need_hi, o.claim.product.stem() + 1);
        }
    }
    std::cout << report.outcomes.size() << " claims: " << verified << " verified, " << refuted
              << " refuted, " << open << " open, " << undecidable << " undecidable\n";
    std::cout << "wrote " << (fs::path(cfg.out) / "claims.txt").string() << ", "
              << (fs::path(cfg.out) / "theorems.txt").string() << "\n";
    if (undecidable > 0) {
        Window wider = tmf.run.e2().window.enlarged(3);
        std::cout << "suggestion: rebuild with --range " << tmf.run.e2().lo << ".." << need_hi
                  << " --window " << wider.lo << ".." << wider.hi
                  << " and re-run build/run/verify\n";
    }
    return report.all_expected_verified() ? 0 : 1;
}

int cmd_catalog(const std::vector<int>& stems) {
    if (stems.empty()) {
        std::cout << "# divided beta family catalog: base stem + 144t\n";
        for (Family fam : kAllFamilies) {
            FamilyElement e{fam, 0};
            std::cout << "stem " << e.stem() << " + 144t: " << e.str() << " (filtration "
                      << e.filtration() << ")\n";
        }
        return 0;
    }
    for (int s : stems) {
        try {
            FamilyElement e = family_at_stem(s);
            J2Class img = hurewicz_image(e);
            std::cout << "stem " << s << ": " << e.str() << " — filtration " << e.filtration()
                      << ", t = " << e.t << ", chart class " << img.label.str() << " at "
                      << img.bd.str() << "\n";
        } catch (const UnknownFamily&) {
            std::cout << "stem " << s << ": no catalogued divided beta element\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"divided beta family chart and claim toolkit"};
    app.require_subcommand(1);

    Overrides o;
    app.add_option("--config", o.config, "JSON configuration file");
    app.add_option("--range", o.range, "stem range A..B");
    app.add_option("--window", o.window, "Δ-power window M..N");
    int k_flag = 0;
    CLI::Option* k_opt = app.add_option("--k", k_flag, "Adams operation index (coprime to 3)");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--grid", o.grid, "claim grid: parameter bound N or N,STEMCAP");

    std::string build_target, run_target = "tmf", chart_target = "j2", chart_range;
    int chart_page = 2;
    std::vector<int> catalog_stems;

    CLI::App* build = app.add_subcommand("build", "assemble an E2 page and archive it");
    build->add_option("target", build_target, "tmf or j2")
        ->required()
        ->check(CLI::IsMember({"tmf", "j2"}));
    CLI::App* runc = app.add_subcommand("run", "turn archived E2 pages to E-infinity");
    runc->add_option("target", run_target, "tmf or j2")
        ->required()
        ->check(CLI::IsMember({"tmf", "j2"}));
    CLI::App* chart = app.add_subcommand("chart", "emit an SVG chart from an archive");
    chart->add_option("target", chart_target, "tmf or j2")
        ->required()
        ->check(CLI::IsMember({"tmf", "j2"}));
    chart->add_option("--page", chart_page, "page index to draw (default 2 = E2)");
    CLI::App* verify = app.add_subcommand("verify", "verify the claim suite against archives");
    CLI::App* catalog = app.add_subcommand("catalog", "look up divided beta elements by stem");
    catalog->add_option("stems", catalog_stems, "stems to query (none: print the family table)");
    for (CLI::App* sub : {build, runc, chart, verify, catalog}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    if (*k_opt) o.k = k_flag;

    try {
        RunConfig cfg = effective_config(o);
        if (*build) return cmd_build(build_target, cfg);
        if (*runc) return cmd_run(run_target, cfg);
        if (*chart) return cmd_chart(chart_target, cfg, chart_page);
        if (*verify) return cmd_verify(cfg);
        if (*catalog) return cmd_catalog(catalog_stems);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
