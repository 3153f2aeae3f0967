#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace betafam {

/* Error taxonomy.  Every throwing precondition in the library uses one of
 * these so callers (and tests) can distinguish bad input from bad math. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonLocalDenominator : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };
struct WindowTooSmall : Error { using Error::Error; };
struct NonUnitSwap : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };
struct FormatVersionMismatch : Error { using Error::Error; };
struct ChecksumFailure : Error { using Error::Error; };
struct MissingArchive : Error { using Error::Error; };
struct UndecidableRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/* Floor division/modulo (C++ '%' truncates toward zero; degree arithmetic
 * needs the mathematician's convention for negative stems). */
inline long long floor_div(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline long long floor_mod(long long a, long long b) { return a - floor_div(a, b) * b; }

/* FNV-1a, 64-bit.  Archive checksums only; not cryptographic. */
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
    return s;
}

/* Atomic publish: write to a sibling temp file, then rename over the target.
 * Readers never observe a half-written artifact. */
inline void atomic_write_file(const std::filesystem::path& target, const std::string& bytes) {
    namespace fs = std::filesystem;
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for write: " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/* Deterministic parallel map over an index range: results land in a
 * pre-sized vector, so the thread count never affects output bytes.
 * BETAFAM_THREADS is the only environment knob the library reads. */
inline unsigned thread_count() {
    if (const char* env = std::getenv("BETAFAM_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = thread_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace betafam
