#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "drivesim/geometry.hpp"

namespace drivesim {

// Constant-turn-rate-and-velocity state: [x, y, yaw, speed, yaw_rate].
using StateVec = Eigen::Matrix<double, 5, 1>;
using StateMat = Eigen::Matrix<double, 5, 5>;
using MeasVec = Eigen::Matrix<double, 3, 1>;   // [x, y, yaw]
using MeasMat = Eigen::Matrix<double, 3, 3>;

struct FilterState {
  StateVec mean{StateVec::Zero()};
  StateMat cov{StateMat::Identity()};
};

struct UkfParams {
  double alpha{0.3};
  double beta{2.0};
  double kappa{0.0};
  double accel_sigma{2.0};       // m/s^2 process noise
  double yaw_accel_sigma{0.6};   // rad/s^2 process noise
  double pos_sigma{0.25};        // m measurement noise
  double yaw_sigma{0.12};        // rad measurement noise
};

struct CholeskyError : std::runtime_error {
  explicit CholeskyError(StateMat covariance)
      : std::runtime_error("sigma point generation failed: covariance not positive-definite"),
        cov(std::move(covariance)) {}
  StateMat cov;
};

// CTRV process model for one state vector.
StateVec ctrv_propagate(const StateVec& x, double dt);

// Propagates mean and covariance through the CTRV model and inflates by the
// discretized process noise. Covariance must be positive-definite.
FilterState ukf_predict(const FilterState& f, double dt, const UkfParams& p);

// Measurement update with a global-frame pose observation. The yaw innovation
// is wrapped into (-pi, pi] before the update.
FilterState ukf_update(const FilterState& f, const MeasVec& z, const UkfParams& p);

// Normalized estimation error squared against a ground-truth state (5 dof).
double nees(const FilterState& f, const StateVec& truth);

}  // namespace drivesim
