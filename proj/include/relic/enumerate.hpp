#pragma once

#include "relic/rational.hpp"
#include "relic/structure.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relic {

struct BudgetExceeded : std::runtime_error {
    BigInt exact_count;
    explicit BudgetExceeded(BigInt count)
        : std::runtime_error("enumeration budget exceeded; exact structure count = " +
                             count.str()),
          exact_count(std::move(count)) {}
};

// Free bit slots of a structure, honoring symmetric/irreflexive tags.
// Slot order: by symbol, then by encoded index of the slot's canonical tuple.
class SlotMap {
public:
    SlotMap(const Signature& sig, int n) {
        for (std::size_t s = 0; s < sig.size(); ++s) {
            const RelSymbol& sym = sig.at(s);
            std::uint64_t total = ipow(static_cast<std::uint64_t>(n), sym.arity);
            if (sym.arity == 2 && (sym.symmetric || sym.irreflexive)) {
                for (int u = 0; u < n; ++u)
                    for (int v = 0; v < n; ++v) {
                        if (sym.irreflexive && u == v) continue;
                        if (sym.symmetric && v < u) continue;
                        std::uint64_t idx =
                            static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + v;
                        std::uint64_t mirror =
                            static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(n) + u;
                        slots_.push_back({s, idx, sym.symmetric && u != v ? mirror : idx});
                    }
            } else {
                for (std::uint64_t idx = 0; idx < total; ++idx) slots_.push_back({s, idx, idx});
            }
        }
    }

    std::size_t bit_count() const { return slots_.size(); }

    void apply(Structure& st, std::uint64_t counter_lo, const std::vector<std::uint64_t>& counter) const {
        for (std::size_t j = 0; j < slots_.size(); ++j) {
            bool bit = counter.empty() ? ((counter_lo >> j) & 1)
                                       : ((counter[j >> 6] >> (j & 63)) & 1);
            const Slot& sl = slots_[j];
            st.set_index(sl.symbol, sl.index, bit);
            if (sl.mirror != sl.index) st.set_index(sl.symbol, sl.mirror, bit);
        }
    }

    struct Slot {
        std::size_t symbol;
        std::uint64_t index;
        std::uint64_t mirror;
    };
    const std::vector<Slot>& slots() const { return slots_; }

private:
    std::vector<Slot> slots_;
};

inline BigInt structure_count(const Signature& sig, int n) {
    SlotMap sm(sig, n);
    BigInt one = 1;
    return one << sm.bit_count();
}

// Yields every structure exactly once, ordered by the free-slot counter
// (slot 0 is the least significant bit). The same Structure buffer is
// reused between callbacks.
inline void enumerate_structures(const SignaturePtr& sig, int n,
                                 const std::function<void(const Structure&)>& fn,
                                 std::uint64_t budget = (1ull << 26)) {
    SlotMap sm(*sig, n);
    if (sm.bit_count() >= 63 || (1ull << sm.bit_count()) > budget)
        throw BudgetExceeded(structure_count(*sig, n));
    std::uint64_t total = 1ull << sm.bit_count();
    Structure st(sig, n);
    for (std::uint64_t i = 0; i < total; ++i) {
        sm.apply(st, i, {});
        fn(st);
    }
}

// Range variant used for deterministic parallel scans.
inline void enumerate_range(const SignaturePtr& sig, int n, std::uint64_t begin,
                            std::uint64_t end, const std::function<void(const Structure&)>& fn) {
    SlotMap sm(*sig, n);
    Structure st(sig, n);
    for (std::uint64_t i = begin; i < end; ++i) {
        sm.apply(st, i, {});
        fn(st);
    }
}

} // namespace relic
