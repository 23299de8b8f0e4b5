#include "kepart/terms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kepart {

namespace {

constexpr std::array<std::string_view, kTermCount> kNames = {
    "T",      "T_Lambda", "T_rho",  "T_rot",     "T_I",       "T_xi",      "T_ext",
    "T_int",  "T_res",    "T_J",    "T_K",       "T_ac",      "E_out",     "E_outA",
    "E_outB", "E_in",     "E_inA",  "E_inB",     "E_c",       "T_res_pos", "T_res_neg",
    "T_res_abs", "T_ac_pos", "T_ac_neg", "T_ac_abs", "E_c_pos", "E_c_neg",
};

std::array<Term, kTermCount> make_terms() {
  std::array<Term, kTermCount> out{};
  for (std::size_t i = 0; i < kTermCount; ++i) out[i] = static_cast<Term>(i);
  return out;
}

}  // namespace

const std::array<Term, kTermCount>& all_terms() {
  static const std::array<Term, kTermCount> terms = make_terms();
  return terms;
}

std::string_view term_name(Term t) { return kNames.at(static_cast<std::size_t>(t)); }

std::optional<Term> parse_term(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  if (it == kNames.end()) return std::nullopt;
  return static_cast<Term>(it - kNames.begin());
}

bool is_expansion_term(Term t) {
  switch (t) {
    case Term::E_out:
    case Term::E_outA:
    case Term::E_outB:
    case Term::E_in:
    case Term::E_inA:
    case Term::E_inB:
    case Term::E_c:
    case Term::E_c_pos:
    case Term::E_c_neg:
      return true;
    default:
      return false;
  }
}

double term_value(const PartitionResult& r, Term t) {
  switch (t) {
    case Term::T: return r.T;
    case Term::T_Lambda: return r.T_Lambda;
    case Term::T_rho: return r.T_rho;
    case Term::T_rot: return r.T_rot;
    case Term::T_I: return r.T_I;
    case Term::T_xi: return r.T_xi;
    case Term::T_ext: return r.T_ext;
    case Term::T_int: return r.T_int;
    case Term::T_res: return r.T_res;
    case Term::T_J: return r.T_J;
    case Term::T_K: return r.T_K;
    case Term::T_ac: return r.T_ac;
    case Term::E_out: return r.E_out;
    case Term::E_outA: return r.E_outA;
    case Term::E_outB: return r.E_outB;
    case Term::E_in: return r.E_in;
    case Term::E_inA: return r.E_inA;
    case Term::E_inB: return r.E_inB;
    case Term::E_c: return r.E_c;
    case Term::T_res_pos: return std::max(r.T_res, 0.0);
    case Term::T_res_neg: return std::max(-r.T_res, 0.0);
    case Term::T_res_abs: return std::abs(r.T_res);
    case Term::T_ac_pos: return std::max(r.T_ac, 0.0);
    case Term::T_ac_neg: return std::max(-r.T_ac, 0.0);
    case Term::T_ac_abs: return std::abs(r.T_ac);
    case Term::E_c_pos: return std::max(r.E_c, 0.0);
    case Term::E_c_neg: return std::max(-r.E_c, 0.0);
  }
  throw std::invalid_argument("term_value: unknown term");
}

}  // namespace kepart
