#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "kepart/partition.hpp"

namespace kepart {

/// Every per-system quantity the harness tracks: the 19 partition terms
/// followed by the signed parts and magnitudes of T_res, T_ac and E_c
/// (H⁺ = max(H, 0), H⁻ = max(−H, 0)).
enum class Term {
  T,
  T_Lambda,
  T_rho,
  T_rot,
  T_I,
  T_xi,
  T_ext,
  T_int,
  T_res,
  T_J,
  T_K,
  T_ac,
  E_out,
  E_outA,
  E_outB,
  E_in,
  E_inA,
  E_inB,
  E_c,
  T_res_pos,
  T_res_neg,
  T_res_abs,
  T_ac_pos,
  T_ac_neg,
  T_ac_abs,
  E_c_pos,
  E_c_neg,
};

inline constexpr std::size_t kTermCount = 27;

/// All terms in declaration order, which is also the CSV row order.
const std::array<Term, kTermCount>& all_terms();

std::string_view term_name(Term t);

std::optional<Term> parse_term(std::string_view name);

/// True for the singular-expansion quantities, which are undefined for
/// degenerate systems.
bool is_expansion_term(Term t);

double term_value(const PartitionResult& r, Term t);

}  // namespace kepart
