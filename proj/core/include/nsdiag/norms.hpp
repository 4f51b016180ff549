#pragma once

#include "nsdiag/check_report.hpp"
#include "nsdiag/grid.hpp"

namespace nsdiag {

enum class LocalNormKind { L2, L3, L4, L4weak, H1, gradL2 };

struct LocalNormRequest {
  Point3 x0{};
  double r = 0.0;
  LocalNormKind kind = LocalNormKind::L2;
};

// (sum_ball |u|^p dx^3)^{1/p}, p in {2,3,4}
double lp_ball(const ScalarField& u, const Point3& x0, double r, int p);
double lp_ball(const VectorField& u, const Point3& x0, double r, int p);

// Weak-L4 quasi-norm on the exact discrete measure:
// max over sample levels v of v * (vol{|u| >= v})^{1/4}.
double weak_l4_ball(const ScalarField& u, const Point3& x0, double r);
double weak_l4_ball(const VectorField& u, const Point3& x0, double r);
double weak_l4_box(const ScalarField& u);
double weak_l4_box(const VectorField& u);

struct H1BallNorms {
  double grad_l2 = 0.0;
  double l2 = 0.0;
  double combination = 0.0; // grad_l2 + l2 / r
};
H1BallNorms h1_ball(const ScalarField& u, const Point3& x0, double r);
H1BallNorms h1_ball(const VectorField& u, const Point3& x0, double r);

double evaluate_local_norm(const ScalarField& u, const LocalNormRequest& req);

// L3(ball) vs r^{1/4} weak-L4(ball); the layer-cake constant is sharp.
double embedding_sharp_constant(); // 4^{1/3} (4 pi / 3)^{1/12}
CheckCase embedding_l3_from_weak_l4(const ScalarField& u, const Point3& x0, double r,
                                    const std::string& digest = "");

} // namespace nsdiag
