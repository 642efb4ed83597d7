#pragma once

#include "varjet/bicomplex.hpp"

namespace varjet {

/// Lagrangian density L, implicitly the (0, dim M)-form L dx^1 ^ ... ^ dx^m.
struct Lagrangian {
  Expr density;
};

/// Candidate Euler-Lagrange expressions Delta_a, one per field.
struct SourceForm {
  std::vector<Expr> components;
};

/// m-component current P^mu.
struct Current {
  std::vector<Expr> components;

  static Current zero(const BundleSignature& sig) {
    return {std::vector<Expr>(static_cast<size_t>(sig.base_dim()))};
  }
};

/// E_a(L) = sum_I (-1)^{|I|} D_I dL/du^a_I
SourceForm euler_lagrange(const Lagrangian& L, const BundleSignature& sig);

struct FirstVariation {
  Expr interior;   // sum_a Q^a E_a(L)
  Current boundary;  // P^mu with pr Q(L) = interior + D_mu P^mu
};

/// Exact decomposition pr Q(L) = sum_a Q^a E_a(L) + D_mu P^mu; the boundary
/// term is pinned by peeling highest-order derivatives first, directions in
/// ascending order.
FirstVariation first_variation_decompose(const Lagrangian& L,
                                         const EvolutionaryField& Q,
                                         const BundleSignature& sig);

/// Writes f as D_mu K^mu, searching a polynomial ansatz on the star-shaped
/// coordinate chart by exact linear algebra. Requires f polynomial in all
/// coordinates. Returns nullopt when no potential exists within the ansatz.
std::optional<Current> invert_total_divergence(const Expr& f,
                                               const BundleSignature& sig);

struct SymmetryVerdict {
  bool is_symmetry = false;
  Current witness;           // K^mu with pr Q(L) = D_mu K^mu when true
  std::vector<Expr> failures;  // nonzero E_a(pr Q(L)) when false
};

/// True iff the Euler operator annihilates pr Q(L); on success also produces
/// the divergence witness K^mu.
SymmetryVerdict is_divergence_symmetry(const Lagrangian& L,
                                       const EvolutionaryField& Q,
                                       const BundleSignature& sig);

struct not_a_symmetry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// J^mu = P^mu - K^mu, with D_mu J^mu = -sum_a Q^a E_a(L) exactly.
/// Throws not_a_symmetry when Q is not a divergence symmetry of L.
Current noether_current(const Lagrangian& L, const EvolutionaryField& Q,
                        const BundleSignature& sig);

struct HelmholtzFailure {
  int field_row = 0;   // a
  int field_col = 0;   // b
  MultiIndex index;    // I
  Expr difference;     // coefficient of the linearization minus its adjoint
};

struct HelmholtzReport {
  bool variational = true;
  std::vector<HelmholtzFailure> failures;
};

/// Self-adjointness of the linearization of Delta (the Helmholtz criterion
/// for the inverse problem): coefficients of D_Delta and its formal adjoint
/// are compared in normal form.
HelmholtzReport helmholtz_check(const SourceForm& delta,
                                const BundleSignature& sig);

/// sum_a Delta_a theta^a ^ dx^1 ^ ... ^ dx^m, the (1, dim M) source form.
BigradedForm source_form_as_bicomplex(const SourceForm& delta,
                                      const BundleSignature& sig);

}  // namespace varjet
