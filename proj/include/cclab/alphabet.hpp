#ifndef CCLAB_ALPHABET_HPP
#define CCLAB_ALPHABET_HPP

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cclab/errors.hpp"

namespace cclab {

using Symbol = std::uint8_t;

// M-ary alphabet {0, 1, ..., M-1}. Symbols are stored as uint8, so M <= 256.
struct Alphabet {
    explicit Alphabet(std::uint32_t m) : M(m) {
        if (m < 2) throw InvalidArgument("Alphabet: M must be >= 2");
        if (m > 256) throw InvalidArgument("Alphabet: M > 256 not supported");
    }
    std::uint32_t M;
    bool operator==(const Alphabet&) const = default;
};

// Length-n sequence over an M-ary alphabet. Construction validates the range;
// mutation through data() is reserved for hot paths that re-establish it.
class SeqM {
public:
    SeqM(Alphabet a, std::size_t n) : alphabet_(a), sym_(n, 0) {}

    SeqM(Alphabet a, std::vector<Symbol> symbols) : alphabet_(a), sym_(std::move(symbols)) {
        for (Symbol v : sym_)
            if (v >= alphabet_.M) throw InvalidArgument("SeqM: symbol out of range");
    }

    static SeqM of(Alphabet a, std::initializer_list<int> values) {
        std::vector<Symbol> sym;
        sym.reserve(values.size());
        for (int v : values) {
            if (v < 0 || static_cast<std::uint32_t>(v) >= a.M)
                throw InvalidArgument("SeqM: symbol out of range");
            sym.push_back(static_cast<Symbol>(v));
        }
        return SeqM(a, std::move(sym));
    }

    std::size_t size() const { return sym_.size(); }
    const Alphabet& alphabet() const { return alphabet_; }
    Symbol operator[](std::size_t k) const { return sym_[k]; }
    std::span<const Symbol> symbols() const { return sym_; }
    Symbol* data() { return sym_.data(); }
    const Symbol* data() const { return sym_.data(); }

    bool operator==(const SeqM& other) const {
        return alphabet_ == other.alphabet_ && sym_ == other.sym_;
    }

    std::string to_string() const;

private:
    Alphabet alphabet_;
    std::vector<Symbol> sym_;
};

// Component-wise (a + b) mod M / (a - b) mod M.
SeqM add_mod(const SeqM& a, const SeqM& b);
SeqM sub_mod(const SeqM& a, const SeqM& b);

// Channel impulse response z_k = sum_{i=0}^{depth} x_{k-i} mod M, with x_j = 0
// before the start of the block. Bijective for every depth and length.
struct IsiMap {
    std::uint32_t depth = 0;
};

SeqM isi_map(const SeqM& x, const IsiMap& g);
SeqM isi_invert(const SeqM& z, const IsiMap& g);

// In-place variants used by the coding loops (out must have x.size() entries).
void isi_map_into(const SeqM& x, const IsiMap& g, Symbol* out);

}  // namespace cclab

#endif
