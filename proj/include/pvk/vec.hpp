#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvk {

// Counter vectors. Natural-valued vectors are plain Vec with all entries >= 0;
// update vectors may be negative.
using Vec = std::vector<long long>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool is_natural(const Vec& v) {
    for (long long x : v)
        if (x < 0) return false;
    return true;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error("vec_add: dimension mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error("vec_sub: dimension mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_scale(const Vec& a, long long n) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * n;
    return r;
}

// Componentwise <=; this is Dickson's ordering on naturals.
inline bool vec_leq(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error("vec_leq: dimension mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline bool vec_within(const Vec& a, long long bound) {
    for (long long x : a)
        if (x < 0 || x > bound) return false;
    return true;
}

inline long long vec_max_entry(const Vec& a) {
    long long m = 0;
    for (long long x : a)
        if (x > m) m = x;
    return m;
}

inline Vec concat(const Vec& a, const Vec& b) {
    Vec r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

inline Vec slice(const Vec& a, size_t from, size_t len) {
    if (from + len > a.size()) throw Error("slice: out of range");
    return Vec(a.begin() + from, a.begin() + from + len);
}

inline Vec prefix(const Vec& a, size_t len) { return slice(a, 0, len); }
inline Vec suffix(const Vec& a, size_t len) { return slice(a, a.size() - len, len); }

inline Vec zeros(size_t n) { return Vec(n, 0); }

inline Vec unit(size_t dim, size_t i) {
    Vec r(dim, 0);
    r[i] = 1;
    return r;
}

// All vectors of the given dimension with entries in 0..bound, in
// lexicographic order. The empty vector is the unique dimension-0 value.
inline std::vector<Vec> enumerate_vectors(size_t dim, long long bound) {
    std::vector<Vec> out;
    Vec cur(dim, 0);
    while (true) {
        out.push_back(cur);
        size_t i = dim;
        while (i > 0) {
            --i;
            if (cur[i] < bound) {
                ++cur[i];
                for (size_t j = i + 1; j < dim; ++j) cur[j] = 0;
                break;
            }
            if (i == 0) return out;
        }
        if (dim == 0) return out;
    }
}

inline std::string format_vec(const Vec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    s += ")";
    return s;
}

} // namespace pvk
