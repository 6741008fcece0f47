#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dilated/error.hpp"
#include "dilated/multi_index.hpp"
#include "dilated/numeric.hpp"
#include "dilated/symbol.hpp"

namespace dilated {

/// n = omega * prod p_j^alpha_j with omega free of every p_j.
struct OmegaDecomposition {
  std::uint64_t omega = 1;
  MultiIndex alpha;

  std::uint64_t reconstruct(std::span<const std::uint64_t> primes) const {
    std::uint64_t n = omega;
    for (std::size_t j = 0; j < primes.size(); ++j)
      for (int e = 0; e < alpha[j]; ++e) n *= primes[j];
    return n;
  }
};

inline OmegaDecomposition omega_decompose(std::uint64_t n, std::span<const std::uint64_t> primes) {
  require(n >= 1, ErrorKind::InvalidArgument, "omega_decompose needs n >= 1");
  OmegaDecomposition d;
  d.alpha = MultiIndex(primes.size());
  for (std::size_t j = 0; j < primes.size(); ++j) {
    require(primes[j] >= 2, ErrorKind::InvalidArgument, "prime must be >= 2");
    while (n % primes[j] == 0) {
      n /= primes[j];
      ++d.alpha[j];
    }
  }
  d.omega = n;
  return d;
}

/// The coefficient model: e_n = sqrt(2/pi) sin(nx) identifies L^2[0, pi] with
/// l^2(N), and the dilation f(x) -> f(p_j x) is the index map n -> p_j n. On a
/// chain N(omega) that map is multiplication by w_j in H^2 of the polydisk.
struct ChainModel {
  std::vector<std::uint64_t> primes;

  std::uint64_t apply_dilation(std::uint64_t n, std::size_t j) const { return n * primes.at(j); }

  std::uint64_t index_of(std::uint64_t omega, const MultiIndex& alpha) const {
    return OmegaDecomposition{omega, alpha}.reconstruct(primes);
  }
};

/// |‖f‖^2 - sum_omega ‖Q(omega) f‖^2| for a finitely supported f on N.
inline double omega_parseval_check(const std::map<std::uint64_t, cplx>& f, std::span<const std::uint64_t> primes) {
  std::vector<double> direct;
  std::map<std::uint64_t, std::vector<double>> chains;
  for (const auto& [n, v] : f) {
    direct.push_back(std::norm(v));
    chains[omega_decompose(n, primes).omega].push_back(std::norm(v));
  }
  std::vector<double> per_chain;
  for (const auto& [omega, parts] : chains) per_chain.push_back(pairwise_sum(parts));
  return std::abs(pairwise_sum(direct) - pairwise_sum(per_chain));
}

struct OmegaClass {
  std::uint64_t omega = 1;
  SparseSymbol symbol;
};

struct SymbolPartition {
  std::vector<OmegaClass> classes;
  bool multi_class = false;
  std::vector<Warning> warnings;

  /// The single symbol A(w); only meaningful when !multi_class.
  const SparseSymbol& symbol() const {
    require(!classes.empty(), ErrorKind::InvalidArgument, "empty frequency support");
    return classes.front().symbol;
  }
};

/// Groups the frequencies of S(x) = sum_j a_j exp(i j x) by omega class and
/// rewrites each class as a symbol on N_0^m.
inline SymbolPartition build_symbol(const std::map<std::uint64_t, cplx>& spectrum,
                                    std::span<const std::uint64_t> primes) {
  require(!spectrum.empty(), ErrorKind::InvalidArgument, "empty frequency support");
  require(!primes.empty(), ErrorKind::InvalidArgument, "at least one prime is required");
  require_distinct_primes(primes);
  std::map<std::uint64_t, SparseSymbol> by_omega;
  for (const auto& [freq, coeff] : spectrum) {
    require(freq >= 1, ErrorKind::InvalidArgument, "frequencies must be positive integers");
    const auto d = omega_decompose(freq, primes);
    auto it = by_omega.try_emplace(d.omega, primes.size()).first;
    it->second.add(d.alpha, coeff);
  }
  SymbolPartition out;
  for (auto& [omega, sym] : by_omega) {
    sym.set_primes(std::vector<std::uint64_t>(primes.begin(), primes.end()));
    out.classes.push_back({omega, sym});
  }
  out.multi_class = out.classes.size() > 1;
  if (out.multi_class) {
    std::string list;
    for (const auto& c : out.classes) list += (list.empty() ? "" : ",") + std::to_string(c.omega);
    out.warnings.push_back({"MultiClass", "frequencies split into omega classes {" + list + "}"});
  }
  return out;
}

}  // namespace dilated
