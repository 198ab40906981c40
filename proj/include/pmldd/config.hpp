#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmldd/grid.hpp"
#include "pmldd/physics.hpp"
#include "pmldd/pml.hpp"

namespace pmldd {

enum class RhsKind { PlaneWave, Random };
enum class FieldFormat { Vtk, Csv };

/// One sweep over overlap widths with a fixed scenario.
///
/// Text format: `[section]` headers and `key = value` lines; `#` starts a
/// comment; lists are comma separated. Sections and keys (defaults in
/// parentheses):
///
///   [physics]        frequency (required), wave_speed (1), eps_r_background (1),
///                    conductivity (0)
///   [geometry]       domain_lengths (required, 3 values), box_extents
///                    (x0,x1,y0,y1,z0,z1; optional), box_eps_r (1)
///   [discretization] n_lambda (required), pml_wavelengths (2),
///                    interface_pml_layers (0)
///   [decomposition]  subdomains (2,2,2), overlaps (2)
///   [method]         global_bc imp|pml (imp), interface_ic imp|pml (imp),
///                    sigma m1|m2 (m2), sigma_m2_constant (2)
///   [solver]         tol (1e-6), max_iter (200), restart (0 = none), seed (42),
///                    rhs planewave|random (planewave), polarization (1,0,0),
///                    verify_direct_max_dofs (20000; 0 disables),
///                    memory_budget_mb (0 = unlimited; rows whose estimated
///                    local factorizations exceed it are skipped)
///   [output]         csv, fields, field_format vtk|csv (vtk), verbosity (1)
struct ExperimentConfig {
  PhysicsSpec physics;
  Vec3 domain_lengths{0.0, 0.0, 0.0};
  std::optional<MaterialBox> box;
  double n_lambda = 0.0;
  double pml_wavelengths = 2.0;
  int interface_pml_layers = 0;
  Index3 subdomains{2, 2, 2};
  std::vector<int> overlaps{2};
  GlobalBc global_bc = GlobalBc::Impedance;
  InterfaceCondition interface_ic = InterfaceCondition::Impedance;
  StretchKind sigma_kind = StretchKind::SigmaM2;
  double sigma_m2_constant = 2.0;
  double tol = 1e-6;
  int max_iter = 200;
  int restart = 0;
  std::uint64_t seed = 42;
  RhsKind rhs = RhsKind::PlaneWave;
  Vec3 polarization{1.0, 0.0, 0.0};
  int verify_direct_max_dofs = 20000;
  double memory_budget_mb = 0.0;
  std::string csv_path;
  std::string fields_path;
  FieldFormat field_format = FieldFormat::Vtk;
  int verbosity = 1;

  /// Semantic checks; throws Error.
  void validate() const;
  DiscretizationSpec discretization(int overlap) const;
};

/// Strict parse: unknown sections or keys, malformed values and missing
/// required keys raise Error with a "line N:" prefix where applicable.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a hash of the canonical text without the [output] section.
std::string config_fingerprint(const ExperimentConfig& config);

std::string to_string(StretchKind k);

}  // namespace pmldd
