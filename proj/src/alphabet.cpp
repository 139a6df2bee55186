#include "cclab/alphabet.hpp"

#include <sstream>

namespace cclab {

std::string SeqM::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < sym_.size(); ++k) {
        if (k) os << ',';
        os << int(sym_[k]);
    }
    os << ']';
    return os.str();
}

namespace {

void require_compatible(const SeqM& a, const SeqM& b, const char* op) {
    if (!(a.alphabet() == b.alphabet()))
        throw InvalidArgument(std::string(op) + ": alphabet mismatch");
    if (a.size() != b.size()) throw InvalidArgument(std::string(op) + ": length mismatch");
}

}  // namespace

SeqM add_mod(const SeqM& a, const SeqM& b) {
    require_compatible(a, b, "add_mod");
    const std::uint32_t M = a.alphabet().M;
    SeqM out(a.alphabet(), a.size());
    Symbol* o = out.data();
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::uint32_t v = std::uint32_t(a[k]) + std::uint32_t(b[k]);
        if (v >= M) v -= M;
        o[k] = static_cast<Symbol>(v);
    }
    return out;
}

SeqM sub_mod(const SeqM& a, const SeqM& b) {
    require_compatible(a, b, "sub_mod");
    const std::uint32_t M = a.alphabet().M;
    SeqM out(a.alphabet(), a.size());
    Symbol* o = out.data();
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::uint32_t v = std::uint32_t(a[k]) + M - std::uint32_t(b[k]);
        if (v >= M) v -= M;
        o[k] = static_cast<Symbol>(v);
    }
    return out;
}

void isi_map_into(const SeqM& x, const IsiMap& g, Symbol* out) {
    const std::uint32_t M = x.alphabet().M;
    const std::size_t n = x.size();
    // Sliding window sum over the last depth+1 inputs, reduced mod M.
    std::uint32_t window = 0;
    for (std::size_t k = 0; k < n; ++k) {
        window += x[k];
        if (k > g.depth) window += M - x[k - g.depth - 1];
        window %= M;
        out[k] = static_cast<Symbol>(window);
    }
}

SeqM isi_map(const SeqM& x, const IsiMap& g) {
    SeqM out(x.alphabet(), x.size());
    isi_map_into(x, g, out.data());
    return out;
}

SeqM isi_invert(const SeqM& z, const IsiMap& g) {
    const std::uint32_t M = z.alphabet().M;
    const std::size_t n = z.size();
    SeqM x(z.alphabet(), n);
    Symbol* o = x.data();
    // Causal recovery: x_k = z_k - sum_{i=1}^{depth} x_{k-i} (mod M).
    for (std::size_t k = 0; k < n; ++k) {
        std::uint32_t acc = z[k];
        const std::size_t lo = k >= g.depth ? k - g.depth : 0;
        for (std::size_t j = lo; j < k; ++j) acc += M - o[j];
        o[k] = static_cast<Symbol>(acc % M);
    }
    return x;
}

}  // namespace cclab
