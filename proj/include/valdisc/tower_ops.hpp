#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "valdisc/field.hpp"

namespace valdisc {

/// Sampling budget shared by the ramification and residue estimates.
struct SampleConfig {
  int samples = 64;
  int spread = 3;
  std::uint64_t seed = 1;
};

/// Certified lower bound for [v(node*) : v(parent*)].
long ramification_degree_lb(const Field& node, const SampleConfig& cfg, std::vector<std::string>* notes = nullptr);
/// Certified lower bound for [kappa_node : kappa_parent].
long residue_degree_lb(const Field& node, const SampleConfig& cfg, std::vector<std::string>* notes = nullptr);

/// The same two bounds measured against the ground field of the tower.
long absolute_ramification_lb(const Field& node, const SampleConfig& cfg);
long absolute_residue_lb(const Field& node, const SampleConfig& cfg, std::vector<std::string>* notes = nullptr);

struct DefectReport {
  long degree = 1;
  long e_lb = 1;
  long f_lb = 1;
  long defect_ub = 1;
  bool defectless = true;
  std::string classification_note;
};

/// n = defect * e * f. Throws ConsistencyError when e_lb * f_lb does not divide n.
DefectReport ostrowski_report(long n, long e_lb, long f_lb, std::string note = {});
/// Measures e_lb, f_lb for one step and applies ostrowski_report.
DefectReport step_defect_report(const Field& node, const SampleConfig& cfg);

}  // namespace valdisc
