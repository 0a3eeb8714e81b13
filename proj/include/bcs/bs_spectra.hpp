#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "bcs/interactions.hpp"
#include "bcs/kernels.hpp"

namespace bcs {

enum class Kernel { K, B, N };
enum class Sector { symmetric, antisymmetric };

const char* to_string(Kernel kernel);
const char* to_string(Sector sector);

// Folded half-line grid. Each Fermi point gets panels_per_side Gauss-Legendre
// panels on either side in the variable t, p = s +- h sinh(t), h = T/sqrt(mu),
// covering cluster_width; the rest of [0, p_max] uses plain panels no wider
// than outer_width. At q = 0 with the defaults this is 6 panels of 24 nodes.
struct GridOptions {
  int nodes_per_panel = 24;
  int panels_per_side = 2;
  double p_max = 0.0;          // <= 0: 8 sqrt(mu + 1)
  double cluster_width = 0.0;  // <= 0: sqrt(mu)
  double outer_width = 0.0;    // <= 0: 5 sqrt(mu)
  bool tail = false;           // extra panel on [p_max, inf) via p = p_max / t
};

struct MomentumGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> panel_edges;  // on [0, p_max]
  double p_max = 0.0;
  int tail_nodes = 0;  // trailing nodes that belong to the tail panel
};

MomentumGrid make_grid(double q, const PhysParams& params, const GridOptions& opts);

struct BSOperatorSpec {
  Kernel kernel = Kernel::N;
  double q = 0.0;
  Sector sector = Sector::symmetric;
  PhysParams params;
  InteractionModel interaction;
  GridOptions grid;
  int max_channel = 8;  // d = 2: angular momenta 0..max_channel of the sector's parity
};

/// Kernel value A(p) at total momentum q (K means 1/K_T(p) and needs q = 0).
double kernel_value(Kernel kernel, double p, double q, const PhysParams& params);

/// H_ij = sqrt(w_i A_i) Vt(p_i, p_j) sqrt(w_j A_j),
/// Vt(p, p') = (2 pi)^{-1/2} [V^(p - p') +- V^(p + p')] in d = 1. For d = 2 (q = 0
/// only) the angular channel `channel` of the radial kernel is used instead.
Eigen::MatrixXd build_bs_matrix(const BSOperatorSpec& spec, const MomentumGrid& grid,
                                int channel = -1);

/// Largest eigenvalue of a symmetric matrix (dense tridiagonal QR).
double top_eigenvalue(const Eigen::MatrixXd& matrix);

/// Smallest eigenvalue of a symmetric matrix.
double bottom_eigenvalue(const Eigen::MatrixXd& matrix);

struct SpectrumResult {
  double top = 0.0;
  double q = 0.0;
  int grid_size = 0;
  double refinement_delta = 0.0;  // |top(2n nodes) - top(n nodes)|, if requested
  Sector sector = Sector::symmetric;
};

/// Top eigenvalue of the sector-restricted operator (maximum over channels in d = 2).
SpectrumResult bs_top(const BSOperatorSpec& spec, bool with_refinement = false);

struct SupOptions {
  double q_max = 0.0;  // <= 0: 4 sqrt(mu)
  int scan_points = 64;
  int golden_iterations = 48;
  int threads = 1;
  GridOptions grid;
};

struct SupResult {
  double q_star = 0.0;
  double value = 0.0;
  bool boundary_warning = false;  // maximizer at q_max
  bool exceeded = false;          // stop_above was reached before the full search
  int evaluations = 0;
};

/// Coarse q scan in [0, q_max] (log-refined near 0 and sqrt(mu)), then a
/// fixed-length golden-section search around the best scan point. Ties go to
/// the smaller q. With stop_above set, returns as soon as a value reaches it.
SupResult sup_over_q(Kernel kernel, const PhysParams& params, const InteractionModel& interaction,
                     Sector sector, const SupOptions& opts,
                     std::optional<double> stop_above = std::nullopt);

/// The scan grid used by sup_over_q, ascending.
std::vector<double> q_scan_grid(double mu, double q_max, int points);

}  // namespace bcs
