// psi-class intersection numbers <tau_{m_1} ... tau_{m_n}>_g and the
// genus-g WK free energies.
#pragma once

#include "wkmap/group_action.hpp"

#include <map>
#include <optional>
#include <tuple>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace wkm {

struct CorrelatorKey {
    int genus = 0;
    std::vector<int> indices;  // sorted
    bool operator<(const CorrelatorKey& o) const {
        return std::tie(genus, indices) < std::tie(o.genus, o.indices);
    }
    bool operator==(const CorrelatorKey& o) const { return genus == o.genus && indices == o.indices; }
};

bool dimension_matches(int g, const std::vector<int>& indices);

// Memoized values; concurrent readers, exclusive writers.
class CorrelatorTable {
public:
    std::optional<Rat> find(const CorrelatorKey& k) const;
    void insert(const CorrelatorKey& k, const Rat& v);
    std::size_t size() const;
    std::map<CorrelatorKey, Rat> snapshot() const;

    // One line per entry: "g;m1,m2,...;p/q".  Returns entries read.
    std::size_t load(const std::string& path);
    void save(const std::string& path) const;

private:
    mutable std::shared_mutex mu_;
    std::map<CorrelatorKey, Rat> data_;
};

CorrelatorTable& default_table();

// (n-3)!/prod i_a!, zero unless sum i_a = n-3
Rat genus0(const std::vector<int>& indices);

// Value from the recursion that eliminates the largest index.
Rat correlator(int g, std::vector<int> indices, CorrelatorTable& table = default_table());

// F_g^WK in the symbols t0, t1, ... up to total degree `degree`.
Poly free_energy_wk(int g, int degree, CorrelatorTable& table = default_table());

// (2n-1)!!, with (-1)!! = 1
Rat double_factorial_odd(int n);

// Residual of the conjugated Virasoro constraint L^phi_k Z^phi = 0 in the
// variables T, genus by genus.  Entry g is the coefficient of eps^{2g-2},
// truncated at T-degree `degree`.
std::vector<Poly> virasoro_check(const Series1& phi, int k, int degree, int g_max,
                                 CorrelatorTable& table = default_table());

// F_g^WK(t) with t = delta_{m,1} + sum N^i_m (T_i - delta_{i,1}) for the
// element phi, i.e. F_g^phi(T), truncated at T-degree `degree`.
Poly free_energy_phi(const Series1& phi, int g, int degree, CorrelatorTable& table = default_table());

}  // namespace wkm
