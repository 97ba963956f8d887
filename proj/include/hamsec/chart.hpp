#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hamsec {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Coordinate charts of the Darboux model.  Variable order is canonical:
//   Full    : x, y, p1..pn, q1..qn   (dim 2n+2)
//   Orbit   : y, p1..pn, q1..qn      (dim 2n+1)
//   Reduced : p1..pn, q1..qn         (dim 2n)
enum class Ambient { Full, Orbit, Reduced };

struct Chart {
    int n = 1;
    Ambient ambient = Ambient::Full;

    Chart() = default;
    Chart(int n_, Ambient a) : n(n_), ambient(a) {
        if (n < 1) throw error("Chart: n must be >= 1");
        if (n > kMaxN) throw error("Chart: n too large (max " + std::to_string(kMaxN) + ")");
    }

    static constexpr int kMaxN = 5;
    static constexpr int kMaxVars = 2 * kMaxN + 2;

    int dim() const {
        switch (ambient) {
            case Ambient::Full: return 2 * n + 2;
            case Ambient::Orbit: return 2 * n + 1;
            case Ambient::Reduced: return 2 * n;
        }
        return 0;
    }

    bool has_x() const { return ambient == Ambient::Full; }
    bool has_y() const { return ambient != Ambient::Reduced; }

    int x_index() const {
        if (!has_x()) throw error("Chart: no x variable");
        return 0;
    }
    int y_index() const {
        if (!has_y()) throw error("Chart: no y variable");
        return ambient == Ambient::Full ? 1 : 0;
    }
    // i in 1..n
    int p_index(int i) const {
        check_pair(i);
        int base = ambient == Ambient::Full ? 2 : (ambient == Ambient::Orbit ? 1 : 0);
        return base + (i - 1);
    }
    int q_index(int i) const {
        check_pair(i);
        return p_index(i) + n;
    }

    std::string var_name(int idx) const {
        if (idx < 0 || idx >= dim()) throw error("Chart: variable index out of range");
        if (has_x() && idx == 0) return "x";
        if (has_y() && idx == y_index()) return "y";
        int base = ambient == Ambient::Full ? 2 : (ambient == Ambient::Orbit ? 1 : 0);
        int k = idx - base;
        if (k < n) return "p" + std::to_string(k + 1);
        return "q" + std::to_string(k - n + 1);
    }

    // -1 if the name is not a variable of this chart.
    int var_index(const std::string& name) const {
        for (int i = 0; i < dim(); ++i)
            if (var_name(i) == name) return i;
        return -1;
    }

    bool operator==(const Chart& o) const { return n == o.n && ambient == o.ambient; }
    bool operator!=(const Chart& o) const { return !(*this == o); }

    std::string describe() const {
        const char* a = ambient == Ambient::Full ? "full" : ambient == Ambient::Orbit ? "orbit" : "reduced";
        return std::string(a) + "(n=" + std::to_string(n) + ")";
    }

private:
    void check_pair(int i) const {
        if (i < 1 || i > n) throw error("Chart: pair index out of range");
    }
};

// Exponent multi-index over a chart, graded-lex ordered (degree first, then
// lexicographic in the canonical variable order).
struct Mono {
    std::array<uint8_t, Chart::kMaxVars> e{};

    int deg() const {
        int d = 0;
        for (auto v : e) d += v;
        return d;
    }
    bool is_one() const {
        for (auto v : e) if (v) return false;
        return true;
    }
    uint8_t operator[](int i) const { return e[size_t(i)]; }
    uint8_t& operator[](int i) { return e[size_t(i)]; }

    bool operator==(const Mono& o) const { return e == o.e; }

    Mono operator*(const Mono& o) const {
        Mono r;
        for (size_t i = 0; i < e.size(); ++i) {
            int s = e[i] + o.e[i];
            if (s > 255) throw error("Mono: exponent overflow");
            r.e[i] = uint8_t(s);
        }
        return r;
    }
};

struct GradedLex {
    bool operator()(const Mono& a, const Mono& b) const {
        int da = a.deg(), db = b.deg();
        if (da != db) return da < db;
        return a.e < b.e;  // canonical variable order, earlier variable heavier
    }
};

}  // namespace hamsec
