#pragma once

#include "flowtime/network.hpp"
#include "flowtime/simplex.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace flowtime {

/// Instance of the normalized-thin-flow problem: the static system whose
/// solutions are the time derivatives of a dynamic equilibrium during one
/// phase. `sets` must satisfy the structural hypothesis (resetting inside
/// active, active acyclic, every node reachable from the source within the
/// active set).
struct NtfInstance {
  Network network;
  EdgeSets sets;
  Rational inflow_value;

  /// Throws std::invalid_argument on a structural violation or negative
  /// inflow value.
  void validate() const;
};

struct NtfSolution {
  std::map<std::string, Rational> flow;    // x' per edge; edges absent from the map carry 0
  std::map<std::string, Rational> labels;  // l' per node
};

struct NtfCertificate {
  bool valid = false;
  std::vector<std::string> violations;
};

/// Label-propagation value of an active edge: flow/capacity on resetting
/// edges, max(tail label, flow/capacity) otherwise.
Rational ntf_rho(const NtfInstance& inst, const Edge& edge, const Rational& tail_label,
                 const Rational& flow);

/// The unique labels induced by a feasible flow: source label 1 and, scanning
/// nodes in topological order of the active set, the minimum rho over active
/// incoming edges. Throws std::invalid_argument when the flow lies outside
/// K(E', u0).
std::map<std::string, Rational> ntf_labels(const NtfInstance& inst,
                                           const std::map<std::string, Rational>& flow);

/// Exact certification: checks feasibility of the flow, the label recursion,
/// and that every active edge with positive flow attains its label bound. The
/// certificate lists all violations.
NtfCertificate certify_ntf(const NtfInstance& inst, const NtfSolution& sol);

/// Computes a normalized thin flow. Enumerates, in deterministic
/// lexicographic order, which active incoming edges of each node attain the
/// label minimum (at least one per node) and which side of the max attains
/// rho on non-resetting tight edges; each guess yields an exact LP
/// (maximize the label sum over the guessed equalities and inequalities),
/// and the first certified optimum is returned. Throws std::logic_error if no
/// guess certifies, which contradicts the existence theorem and indicates a
/// bug.
NtfSolution solve_ntf(const NtfInstance& inst);

/// Label maps of every certified guess. Thin-flow labels are unique, so the
/// result must be a singleton; the full enumeration exists as a test oracle.
/// Refuses instances whose active set exceeds `edge_cap` edges.
std::set<std::map<std::string, Rational>> enumerate_ntf_labels(const NtfInstance& inst,
                                                               std::size_t edge_cap = 12);

}  // namespace flowtime
