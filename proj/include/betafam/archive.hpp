#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "betafam/page.hpp"
#include "betafam/util.hpp"

namespace betafam {

/* --- page archives ---------------------------------------------------------- *
 *
 * Versioned structured-text serialization of a whole Run: every page with its
 * labels, relation lattices, E2 representatives and installed differentials,
 * plus the generator rules and equaliser parameter used to build it.  The
 * format is token-oriented, scalars use LocalInt::str (so lattice entries
 * with units like 1/2 round-trip exactly), and the file ends with an FNV-1a
 * checksum over everything before it.  Loading verifies the version line
 * first (FormatVersionMismatch), then the checksum (ChecksumFailure, which a
 * truncated file always trips), then parses. */

inline constexpr const char* kArchiveMagic = "betafam-pages";
inline constexpr int kArchiveVersion = 1;

/* A loaded archive: the run plus the configuration echo stored with it.
 * `note` records a range restriction when the caller asked for a narrower
 * stem range than the file holds; empty for verbatim loads. */
struct PageArchive {
    Run run;
    int k = 0; /* 0 when the run is not an equaliser (plain TMF pages) */
    std::vector<DifferentialRule> rules;
    std::string note;
};

namespace detail {

inline void put_mat(std::string& out, const char* tag, const Mat& m) {
    out += tag;
    out += ' ' + std::to_string(m.rows()) + ' ' + std::to_string(m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out += ' ' + m(i, j).str();
    out += '\n';
}

struct TokenReader {
    std::istringstream in;
    explicit TokenReader(const std::string& body) : in(body) {}

    std::string word(const char* what) {
        std::string t;
        if (!(in >> t)) throw Error(std::string("archive parse: missing ") + what);
        return t;
    }
    long long integer(const char* what) {
        std::string t = word(what);
        try {
            return std::stoll(t);
        } catch (const std::exception&) {
            throw Error(std::string("archive parse: bad integer for ") + what + ": '" + t + "'");
        }
    }
    LocalInt scalar(const char* what) { return LocalInt::from_string(word(what)); }
    void expect(const char* kw) {
        std::string t = word(kw);
        if (t != kw) throw Error(std::string("archive parse: expected '") + kw + "', got '" + t + "'");
    }
    Mat mat(const char* kw) {
        expect(kw);
        int rows = static_cast<int>(integer("rows")), cols = static_cast<int>(integer("cols"));
        Mat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = scalar("matrix entry");
        return m;
    }
};

inline void put_mono(std::string& out, const Monomial& g) {
    out += std::to_string(g.a) + ' ' + std::to_string(g.b) + ' ' + std::to_string(g.m) + ' ' +
           std::to_string(g.eps) + ' ' + std::to_string(g.k);
}

inline Monomial get_mono(TokenReader& r) {
    Monomial g;
    g.a = static_cast<int>(r.integer("mono.a"));
    g.b = static_cast<int>(r.integer("mono.b"));
    g.m = static_cast<int>(r.integer("mono.m"));
    g.eps = static_cast<int>(r.integer("mono.eps"));
    g.k = static_cast<int>(r.integer("mono.k"));
    return g;
}

} // namespace detail

inline std::string save_run(const Run& run, int k, const std::vector<DifferentialRule>& rules) {
    std::string b;
    b += std::string(kArchiveMagic) + ' ' + std::to_string(kArchiveVersion) + '\n';
    b += "k " + std::to_string(k) + '\n';
    b += "rules " + std::to_string(rules.size()) + '\n';
    for (const DifferentialRule& r : rules) {
        b += "rule " + r.name + ' ' + std::to_string(r.page) + ' ' +
             std::to_string(static_cast<int>(r.provenance)) + ' ';
        detail::put_mono(b, r.source);
        b += ' ' + std::to_string(r.value.terms().size());
        for (const auto& [mono, c] : r.value.terms()) {
            b += ' ' + c.str() + ' ';
            detail::put_mono(b, mono);
        }
        b += '\n';
    }
    b += "turns " + std::to_string(run.nontrivial_turns.size());
    for (int t : run.nontrivial_turns) b += ' ' + std::to_string(t);
    b += '\n';
    b += "pages " + std::to_string(run.pages.size()) + '\n';
    for (const Page& p : run.pages) {
        b += "page " + std::to_string(p.r) + ' ' + std::to_string(p.dr) + ' ' +
             std::to_string(p.lo) + ' ' + std::to_string(p.hi) + ' ' + std::to_string(p.margin) +
             ' ' + std::to_string(p.window.lo) + ' ' + std::to_string(p.window.hi) + '\n';
        b += "slices " + std::to_string(p.slices.size()) + '\n';
        for (const auto& [bd, ps] : p.slices) {
            b += "slice " + std::to_string(bd.s) + ' ' + std::to_string(bd.f) + ' ' +
                 std::to_string(ps.slice.n()) + '\n';
            for (const Label& l : ps.slice.labels) {
                b += "label ";
                detail::put_mono(b, l.mono);
                b += ' ' + std::to_string(l.pow3) + ' ' + std::to_string(l.boundary ? 1 : 0) +
                     ' ' + std::to_string(l.bracket ? 1 : 0) + ' ' +
                     std::to_string(l.mixed ? 1 : 0) + '\n';
            }
            detail::put_mat(b, "rels", ps.slice.rels);
            detail::put_mat(b, "reps", ps.reps);
        }
        b += "diffs " + std::to_string(p.diff.size()) + '\n';
        for (const auto& [bd, m] : p.diff) {
            b += "diff " + std::to_string(bd.s) + ' ' + std::to_string(bd.f) + '\n';
            detail::put_mat(b, "mat", m);
        }
        b += "endpage\n";
    }
    return b + "checksum " + to_hex(fnv1a64(b)) + '\n';
}

inline PageArchive load_run(const std::string& text) {
    /* version line first: a file that is not ours fails here, not on checksum */
    {
        std::istringstream first(text.substr(0, text.find('\n')));
        std::string magic;
        int version = -1;
        if (!(first >> magic >> version) || magic != kArchiveMagic)
            throw FormatVersionMismatch("not a " + std::string(kArchiveMagic) + " archive");
        if (version != kArchiveVersion)
            throw FormatVersionMismatch("archive version " + std::to_string(version) +
                                        ", reader supports " + std::to_string(kArchiveVersion));
    }
    size_t mark = text.rfind("\nchecksum ");
    if (mark == std::string::npos) throw ChecksumFailure("archive has no checksum line");
    std::string body = text.substr(0, mark + 1);
    {
        std::istringstream tail(text.substr(mark + 1));
        std::string kw, hex;
        tail >> kw >> hex;
        if (hex != to_hex(fnv1a64(body)))
            throw ChecksumFailure("archive checksum mismatch (truncated or edited?)");
    }

    detail::TokenReader r(body);
    r.word("magic");
    r.integer("version");
    PageArchive out;
    r.expect("k");
    out.k = static_cast<int>(r.integer("k"));
    r.expect("rules");
    int nrules = static_cast<int>(r.integer("rule count"));
    for (int i = 0; i < nrules; ++i) {
        r.expect("rule");
        DifferentialRule rule;
        rule.name = r.word("rule name");
        rule.page = static_cast<int>(r.integer("rule page"));
        rule.provenance = static_cast<DifferentialRule::Provenance>(r.integer("rule provenance"));
        rule.source = detail::get_mono(r);
        int nterms = static_cast<int>(r.integer("rule terms"));
        for (int t = 0; t < nterms; ++t) {
            LocalInt c = r.scalar("rule coefficient");
            Monomial mono = detail::get_mono(r);
            rule.value += RingElement(mono, c);
        }
        rule.validate();
        out.rules.push_back(std::move(rule));
    }
    r.expect("turns");
    int nturns = static_cast<int>(r.integer("turn count"));
    for (int i = 0; i < nturns; ++i)
        out.run.nontrivial_turns.push_back(static_cast<int>(r.integer("turn")));
    r.expect("pages");
    int npages = static_cast<int>(r.integer("page count"));
    for (int pi = 0; pi < npages; ++pi) {
        r.expect("page");
        Page p;
        p.r = static_cast<int>(r.integer("page r"));
        p.dr = static_cast<int>(r.integer("page dr"));
        p.lo = static_cast<int>(r.integer("page lo"));
        p.hi = static_cast<int>(r.integer("page hi"));
        p.margin = static_cast<int>(r.integer("page margin"));
        p.window.lo = static_cast<int>(r.integer("window lo"));
        p.window.hi = static_cast<int>(r.integer("window hi"));
        r.expect("slices");
        int nslices = static_cast<int>(r.integer("slice count"));
        for (int si = 0; si < nslices; ++si) {
            r.expect("slice");
            Bidegree bd;
            bd.s = static_cast<int>(r.integer("slice s"));
            bd.f = static_cast<int>(r.integer("slice f"));
            int n = static_cast<int>(r.integer("slice n"));
            PageSlice ps;
            for (int i = 0; i < n; ++i) {
                r.expect("label");
                Label l;
                l.mono = detail::get_mono(r);
                l.pow3 = static_cast<int>(r.integer("label pow3"));
                l.boundary = r.integer("label boundary") != 0;
                l.bracket = r.integer("label bracket") != 0;
                l.mixed = r.integer("label mixed") != 0;
                ps.slice.labels.push_back(l);
            }
            ps.slice.rels = r.mat("rels");
            ps.reps = r.mat("reps");
            if (ps.slice.rels.rows() != n || ps.reps.cols() != n)
                throw Error("archive parse: slice " + bd.str() + " has inconsistent shapes");
            p.slices.emplace(bd, std::move(ps));
        }
        r.expect("diffs");
        int ndiffs = static_cast<int>(r.integer("diff count"));
        for (int di = 0; di < ndiffs; ++di) {
            r.expect("diff");
            Bidegree bd;
            bd.s = static_cast<int>(r.integer("diff s"));
            bd.f = static_cast<int>(r.integer("diff f"));
            p.diff.emplace(bd, r.mat("mat"));
        }
        r.expect("endpage");
        out.run.pages.push_back(std::move(p));
    }
    if (out.run.pages.empty()) throw Error("archive parse: no pages");
    return out;
}

/* Load restricted to [lo, hi]: slices outside the (margin-padded) requested
 * range are dropped and the restriction is recorded in `note`.  Verdicts
 * near the new edges lose certification exactly as a direct narrow run
 * would; nothing inside the range changes. */
inline PageArchive load_run(const std::string& text, int lo, int hi) {
    PageArchive ar = load_run(text);
    const Page& front = ar.run.pages.front();
    if (lo <= front.lo && hi >= front.hi) return ar; /* nothing to restrict */
    int olo = front.lo, ohi = front.hi;
    for (Page& p : ar.run.pages) {
        p.lo = std::max(p.lo, lo);
        p.hi = std::min(p.hi, hi);
        if (p.lo > p.hi) throw Error("archive restriction leaves an empty range");
        std::map<Bidegree, PageSlice> kept;
        for (auto& [bd, ps] : p.slices)
            if (bd.s >= p.raw_lo() && bd.s <= p.raw_hi()) kept.emplace(bd, std::move(ps));
        p.slices = std::move(kept);
        std::map<Bidegree, Mat> kd;
        for (auto& [bd, m] : p.diff)
            if (p.find(bd) && p.find(d_target(bd, p.dr))) kd.emplace(bd, std::move(m));
        p.diff = std::move(kd);
    }
    ar.note = "restricted to [" + std::to_string(ar.run.pages.front().lo) + "," +
              std::to_string(ar.run.pages.front().hi) + "] from [" + std::to_string(olo) + "," +
              std::to_string(ohi) + "]";
    return ar;
}

inline void save_run_file(const std::filesystem::path& path, const Run& run, int k,
                          const std::vector<DifferentialRule>& rules) {
    atomic_write_file(path, save_run(run, k, rules));
}

inline PageArchive load_run_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingArchive("no archive at " + path.string());
    return load_run(read_file(path));
}

inline PageArchive load_run_file(const std::filesystem::path& path, int lo, int hi) {
    if (!std::filesystem::exists(path)) throw MissingArchive("no archive at " + path.string());
    return load_run(read_file(path), lo, hi);
}

} // namespace betafam
