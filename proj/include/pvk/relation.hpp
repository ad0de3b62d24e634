#pragma once

#include "pvk/vec.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <utility>

namespace pvk {

// A finite relation between natural vectors of fixed in/out dimensions.
// Pairs are kept sorted and deduplicated, so iteration order (and therefore
// all derived output) is canonical.
class BoundedRel {
public:
    BoundedRel() = default;
    BoundedRel(size_t in_dim, size_t out_dim) : in_(in_dim), out_(out_dim) {}

    size_t in_dim() const { return in_; }
    size_t out_dim() const { return out_; }

    void insert(const Vec& x, const Vec& y) {
        if (x.size() != in_ || y.size() != out_)
            throw Error("BoundedRel::insert: dimension mismatch");
        pairs_.emplace(x, y);
    }

    bool contains(const Vec& x, const Vec& y) const {
        return pairs_.count({x, y}) > 0;
    }

    size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    const std::set<std::pair<Vec, Vec>>& pairs() const { return pairs_; }

    bool operator==(const BoundedRel& o) const {
        return in_ == o.in_ && out_ == o.out_ && pairs_ == o.pairs_;
    }
    bool operator!=(const BoundedRel& o) const { return !(*this == o); }

    static BoundedRel unite(const BoundedRel& a, const BoundedRel& b) {
        if (a.in_ != b.in_ || a.out_ != b.out_)
            throw Error("BoundedRel::unite: dimension mismatch");
        BoundedRel r = a;
        r.pairs_.insert(b.pairs_.begin(), b.pairs_.end());
        return r;
    }

    // Relational composition; middles must have matching dimension.
    static BoundedRel compose(const BoundedRel& a, const BoundedRel& b) {
        if (a.out_ != b.in_)
            throw Error("BoundedRel::compose: middle dimension mismatch");
        BoundedRel r(a.in_, b.out_);
        std::unordered_map<std::string, std::vector<const Vec*>> by_in;
        by_in.reserve(b.pairs_.size());
        for (const auto& [x, y] : b.pairs_) by_in[key(x)].push_back(&y);
        for (const auto& [x, m] : a.pairs_) {
            auto it = by_in.find(key(m));
            if (it == by_in.end()) continue;
            for (const Vec* y : it->second) r.pairs_.emplace(x, *y);
        }
        return r;
    }

    // Minkowski sum of two relations viewed as sets of (in # out) vectors.
    static BoundedRel sum(const BoundedRel& a, const BoundedRel& b) {
        if (a.in_ != b.in_ || a.out_ != b.out_)
            throw Error("BoundedRel::sum: dimension mismatch");
        BoundedRel r(a.in_, a.out_);
        for (const auto& [x1, y1] : a.pairs_)
            for (const auto& [x2, y2] : b.pairs_)
                r.pairs_.emplace(vec_add(x1, x2), vec_add(y1, y2));
        return r;
    }

    // Identity on all vectors with entries <= bound.
    static BoundedRel identity(size_t dim, long long bound) {
        BoundedRel r(dim, dim);
        for (const Vec& v : enumerate_vectors(dim, bound)) r.pairs_.emplace(v, v);
        return r;
    }

    // Reflexive-transitive closure over vectors <= bound: identity on all
    // vectors <= bound plus fixpoint iteration of the join until stable.
    // The iteration count is capped by the (finite) number of candidate
    // pairs, which guarantees termination.
    static BoundedRel star(const BoundedRel& step, long long bound) {
        if (step.in_ != step.out_)
            throw Error("BoundedRel::star: relation not square");
        BoundedRel r = identity(step.in_, bound);
        size_t cap = 1;
        {
            size_t nv = 1;
            for (size_t i = 0; i < step.in_; ++i) {
                nv *= static_cast<size_t>(bound + 1);
                if (nv > 1u << 20) break;
            }
            cap = nv * nv + 2;
        }
        for (size_t iter = 0; iter < cap; ++iter) {
            BoundedRel next = unite(r, compose(r, step));
            if (next == r) return r;
            r = std::move(next);
        }
        return r;
    }

private:
    static std::string key(const Vec& v) {
        std::string s;
        s.reserve(v.size() * 3);
        for (long long x : v) {
            s += std::to_string(x);
            s += ',';
        }
        return s;
    }

    size_t in_ = 0;
    size_t out_ = 0;
    std::set<std::pair<Vec, Vec>> pairs_;
};

} // namespace pvk
