#pragma once

// Two fermionic modes on the 4-dimensional space spanned by
// (|11>, |10>, |01>, |00>), with mode operators
//   c1 = c (x) I,   c2 = sigma3 (x) c,
// where c = [[0, 0], [1, 0]] annihilates the single-mode basis (|1>, |0>)
// and the sigma3 factor carries the Jordan-Wigner sign.  Supplies the
// coherent displacement U(z1, z2) = exp(z1 c1 - z1* c1+ + z2 c2 - z2* c2+),
// the coherent families built on the vacuum |00> and on the entangled
// fiducial (|10> + |01>)/sqrt(2), and their closed-form label flows under
// exp(+i t H) with
//   H = sum_j (Aj/2){cj+, cj} + (Bj/2)[cj+, cj] = diag(w1, w2, w3, w4),
//   w = ((A1+A2)/2 +- B1/2 +- B2/2) on (|11>, |10>, |01>, |00>).

#include <Eigen/Dense>

#include "varq/common.hpp"

namespace varq::fermi {

struct TwoModeParams {
    double a1 = 0.0, b1 = 0.0;
    double a2 = 0.0, b2 = 0.0;

    double omega1() const { return 0.5 * (a1 + a2) + 0.5 * (b1 + b2); }
    double omega2() const { return 0.5 * (a1 + a2) + 0.5 * (b1 - b2); }
    double omega3() const { return 0.5 * (a1 + a2) - 0.5 * (b1 - b2); }
    double omega4() const { return 0.5 * (a1 + a2) - 0.5 * (b1 + b2); }
};

// mode = 1 or 2; entries are exactly 0 or +-1.
Eigen::Matrix4cd annihilator(int mode);

// Built from the operator expression above; comes out diagonal
// (w1, w2, w3, w4).
Eigen::Matrix4cd two_mode_hamiltonian(const TwoModeParams& p);

// The coherent displacement.  With r = sqrt(|z1|^2 + |z2|^2) and
// s = sin(r)/r:
//   [ cos r      -s z2*   -s z1*    0     ]
//   [ s z2        cos r    0       -s z1* ]
//   [ s z1        0        cos r    s z2* ]
//   [ 0           s z1    -s z2     cos r ]
// U(0, 0) = I; unitary for all labels.
Eigen::Matrix4cd displacement(Complex z1, Complex z2);

enum class Fiducial {
    kVacuum,     // |00>
    kEntangled,  // (|10> + |01>)/sqrt(2)
};

// U(z1, z2) applied to the fiducial vector.
Eigen::Vector4cd two_mode_state(Complex z1, Complex z2, Fiducial fiducial);

struct TwoModeFlowResult {
    Complex z1, z2;        // transported labels
    double phase = 0.0;    // exp(+i t H)|state> = e^{i phase} |state(z1(t), z2(t))>
    bool family_preserved = false;
};

// Closed-form label flow under exp(+i t H).
//
// Vacuum fiducial: conjugating the displacement through the propagator gives
// exp(+itH) cj exp(-itH) = e^{-i Bj t} cj, so the family is always preserved
// with z_j(t) = z_j e^{-i Bj t} and global phase w4 t.
//
// Entangled fiducial: the family is preserved iff B1 = B2 (the two middle
// levels stay degenerate); then z_j(t) = z_j e^{-i B t} with global phase
// (A1 + A2) t / 2.  Otherwise family_preserved is false and the returned
// labels are the same best-effort transport, which no longer reconstructs
// the evolved state (see entangled_family_deficit).
TwoModeFlowResult two_mode_flow(Complex z1, Complex z2, const TwoModeParams& p,
                                double t, Fiducial fiducial);

// Squared projection of exp(+itH)|z1, z2; entangled> onto the antisymmetric
// direction (|10> - |01>)/sqrt(2), which is orthogonal to every state of the
// entangled family: a rigorous lower bound on the best-overlap deficit
// 1 - max_w |<w1, w2|psi(t)>|^2.  Evaluates to
// cos^2(r) sin^2((B1 - B2) t / 2); identically zero when B1 = B2.
double entangled_family_deficit(Complex z1, Complex z2, const TwoModeParams& p,
                                double t);

}  // namespace varq::fermi
