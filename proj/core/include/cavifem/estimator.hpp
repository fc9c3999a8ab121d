#pragma once

#include "cavifem/solver.hpp"

namespace cavifem {

// Elementwise estimator eta_K^2 split into its four parts; the obstacle and
// complementarity terms are zero for the penalty method.
struct EstimatorReport {
  struct ElementTerms {
    double residual = 0.0;        // (h_K^2/d_K^3) ||E p + lambda + f||^2
    double edge = 0.0;            // 1/2 (h_E/d_E^3) ||d^3 [grad p . n]||^2
    double obstacle = 0.0;        // ||(p_c - p)_+||^2 in the energy norm
    double complementarity = 0.0; // int (p - p_c)_+ lambda

    double eta_sq() const {
      return residual + edge + obstacle + complementarity;
    }
  };

  std::vector<ElementTerms> elements;
  double total = 0.0;  // sqrt of the sum of eta_K^2
  int n_dofs = 0;      // free dofs of the run

  double max_eta() const;
};

EstimatorReport estimate_nitsche(const Coefficients& coeffs,
                                 const SolverConfig& config, const Mesh& mesh,
                                 const DofMap& dofmap,
                                 const FieldVector& field);

EstimatorReport estimate_penalty(const Coefficients& coeffs,
                                 const SolverConfig& config, const Mesh& mesh,
                                 const DofMap& dofmap,
                                 const FieldVector& field);

EstimatorReport estimate(const Coefficients& coeffs, const SolverConfig& config,
                         const Mesh& mesh, const DofMap& dofmap,
                         const FieldVector& field);

// Elements with eta_K strictly above beta * max eta_K.
MarkSet mark(const EstimatorReport& report, double beta);

void write_report_csv(const EstimatorReport& report, const std::string& path);

}  // namespace cavifem
