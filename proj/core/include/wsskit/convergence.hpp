#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wsskit/mesh.hpp"

namespace wsskit {

enum class Measure { surface, volume };

/// P1 transfer of a per-vertex field from `coarse` to the vertices of
/// `fine`: each fine vertex takes the barycentric interpolation at its
/// closest point on the coarse triangles (tets). Throws Errc::out_of_domain
/// when that closest point is farther than 0.5 * mean_mesh_size(coarse),
/// Errc::dimension_mismatch when the field does not match the coarse mesh.
std::vector<double> project_field(const SurfaceMesh& coarse, std::span<const double> field, const SurfaceMesh& fine);
std::vector<double> project_field(const TetMesh& coarse, std::span<const double> field, const TetMesh& fine);

/// (1/sqrt|Omega|) * ||f - f_ref||_L2 with mass-lumped P1 quadrature on
/// `mesh`; the measure |Omega| uses the same lumped weights, so a constant
/// difference d returns |d|. Throws Errc::dimension_mismatch.
double weighted_l2_error(std::span<const double> field, std::span<const double> reference, const SurfaceMesh& mesh);
double weighted_l2_error(std::span<const double> field, std::span<const double> reference, const TetMesh& mesh);

/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for consecutive pairs. Throws
/// Errc::non_positive_input and Errc::dimension_mismatch.
std::vector<double> eoc(std::span<const double> errors, std::span<const double> h);

struct ConvergenceRow {
  std::size_t mesh = 0;  // 1-based, as in published tables
  std::size_t elements = 0;
  double h = 0.0;
  double err_u = 0.0;
  std::optional<double> eoc_u;  // empty for the last row and for vanishing errors
  std::optional<double> err_tau;
  std::optional<double> eoc_tau;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::size_t reference_mesh_id = 0;  // 1-based; 0 when errors were ingested
};

/// Errors at or below this fraction of the reference field's magnitude are
/// treated as vanishing: the adjacent EOC entries are left undefined.
inline constexpr double kVanishingError = 1e-12;

/// Projects each field to the reference mesh and fills one row per
/// non-reference mesh (ordered as given; h must strictly decrease).
/// `tau_fields` is optional (empty span) and fills the second error column.
/// `reference` is a 0-based index into `meshes`.
ConvergenceReport run_convergence_study(std::span<const SurfaceMesh> meshes,
                                        std::span<const std::vector<double>> fields, std::size_t reference,
                                        std::span<const std::vector<double>> tau_fields = {});
ConvergenceReport run_convergence_study(std::span<const TetMesh> meshes, std::span<const std::vector<double>> fields,
                                        std::size_t reference, std::span<const std::vector<double>> tau_fields = {});

/// Fills the EOC columns of rows whose h and errors are already set.
void compute_eoc_columns(ConvergenceReport& report, double vanishing = 0.0);

/// Reads a table with columns mesh,elements,h,err_u[,err_tau] (header
/// line required) and computes the EOC columns.
ConvergenceReport read_convergence_table(std::istream& in);
ConvergenceReport load_convergence_table(const std::filesystem::path& path);

/// Aligned text mirroring the published layout, and CSV with columns
/// mesh,elements,h,err_u,eoc_u,err_tau,eoc_tau ('-' for undefined).
void write_report_text(std::ostream& out, const ConvergenceReport& report);
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace wsskit
