#pragma once

namespace robagg::tol {

// Probability vectors must sum to one within this slack.
inline constexpr double simplex = 1e-10;
// Default stopping tolerance for iterative solvers.
inline constexpr double solver = 1e-8;
// Central finite-difference step.
inline constexpr double fd_step = 1e-5;
// Ball membership slack.
inline constexpr double ball = 1e-10;
// A witness counts as feasible when max_i (D_i - r_i) is at most this.
inline constexpr double witness = 1e-8;
// Intersections whose best witness has less slack than this are treated as
// a single point.
inline constexpr double singleton_slack = 1e-9;
// Chernoff bisection width on the radius.
inline constexpr double chernoff_radius = 1e-11;
// Barrier method duality-gap target.
inline constexpr double barrier_gap = 1e-12;

inline constexpr int max_bisection_steps = 200;
inline constexpr int max_bracket_doublings = 60;

} // namespace robagg::tol
