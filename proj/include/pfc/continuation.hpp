#pragma once

#include <string>
#include <vector>

#include "pfc/model.hpp"

namespace pfc {

struct BranchPoint {
  double arclength = 0.0;
  double psibar = 0.0;
  double l2norm = 0.0;
  double energy_minus_e0 = 0.0;
  double hex_amp = 0.0;  // a_{Nx,Ny}
  bool fold = false;     // a fold in psibar lies between this point and the next
  CoeffGrid grid;
  std::vector<double> tangent;  // unit tangent in (a, psibar), psibar last
};

struct Fold {
  double psibar = 0.0;  // vertex of a parabola fitted through neighbouring points
  int index = 0;
};

// Zero of hex_amp located by linear interpolation between two points;
// resolution is the psibar gap of the bracketing segment.
struct AmplitudeCrossing {
  double psibar = 0.0;
  double resolution = 0.0;
  int index = 0;
};

struct ContinuationOptions {
  double ds = 4e-3;
  double ds_min = 1e-6;
  double ds_max = 1e-2;
  int max_points = 3000;
  double newton_tol = 1e-12;  // bound on ||F||_nu and on the arclength residual
  double nu = 1.05;
  int newton_max_iter = 10;
  double min_tangent_cos = 0.99;  // steps turning the tangent further are retried with ds/2
  double psibar_min = -1.0, psibar_max = 1.0;
  int direction = 1;  // sign of the initial dpsibar/ds
  int max_folds = 0;  // stop after this many folds; 0 means no limit
  bool stop_on_loop = true;
  Exec exec = Exec::parallel;
};

struct Branch {
  ModelSpec spec;  // psibar is that of the start point
  int m = 0;
  std::vector<BranchPoint> points;
  std::vector<Fold> folds;
  std::vector<AmplitudeCrossing> crossings;
  bool closed = false;   // returned to the start point
  bool partial = false;  // step size fell below ds_min
  std::string message;
};

// Pseudo-arclength continuation in psibar starting from a steady state of
// spec. The start grid is Newton-polished first.
Branch continue_branch(const CoeffGrid& start, const ModelSpec& spec, int m, const ContinuationOptions& opt = {});

}  // namespace pfc
