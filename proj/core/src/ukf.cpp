#include "drivesim/ukf.hpp"

#include <cmath>

namespace drivesim {

namespace {

constexpr int kN = 5;
constexpr int kSigma = 2 * kN + 1;

struct SigmaSet {
  Eigen::Matrix<double, kN, kSigma> points;
  Eigen::Matrix<double, kSigma, 1> wm;
  Eigen::Matrix<double, kSigma, 1> wc;
};

SigmaSet make_sigma_points(const FilterState& f, const UkfParams& p) {
  const double lambda = p.alpha * p.alpha * (kN + p.kappa) - kN;
  const double scale = kN + lambda;

  Eigen::LLT<StateMat> llt(f.cov);
  if (llt.info() != Eigen::Success) {
    throw CholeskyError(f.cov);
  }
  const StateMat sqrt_cov = llt.matrixL();

  SigmaSet s;
  s.points.col(0) = f.mean;
  const double k = std::sqrt(scale);
  for (int i = 0; i < kN; ++i) {
    s.points.col(1 + i) = f.mean + k * sqrt_cov.col(i);
    s.points.col(1 + kN + i) = f.mean - k * sqrt_cov.col(i);
  }
  s.wm.setConstant(1.0 / (2.0 * scale));
  s.wc.setConstant(1.0 / (2.0 * scale));
  s.wm(0) = lambda / scale;
  s.wc(0) = lambda / scale + (1.0 - p.alpha * p.alpha + p.beta);
  return s;
}

StateMat process_noise(const StateVec& mean, double dt, const UkfParams& p) {
  // Noise enters as piecewise-constant linear and yaw acceleration.
  const double yaw = mean(2);
  Eigen::Matrix<double, kN, 2> g = Eigen::Matrix<double, kN, 2>::Zero();
  g(0, 0) = 0.5 * dt * dt * std::cos(yaw);
  g(1, 0) = 0.5 * dt * dt * std::sin(yaw);
  g(3, 0) = dt;
  g(2, 1) = 0.5 * dt * dt;
  g(4, 1) = dt;
  Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
  q(0, 0) = p.accel_sigma * p.accel_sigma;
  q(1, 1) = p.yaw_accel_sigma * p.yaw_accel_sigma;
  return g * q * g.transpose();
}

}  // namespace

StateVec ctrv_propagate(const StateVec& x, double dt) {
  const double yaw = x(2);
  const double v = x(3);
  const double omega = x(4);
  StateVec out = x;
  if (std::abs(omega) < 1e-6) {
    out(0) += v * std::cos(yaw) * dt;
    out(1) += v * std::sin(yaw) * dt;
  } else {
    out(0) += v / omega * (std::sin(yaw + omega * dt) - std::sin(yaw));
    out(1) += v / omega * (std::cos(yaw) - std::cos(yaw + omega * dt));
  }
  out(2) = wrap_angle(yaw + omega * dt);
  return out;
}

FilterState ukf_predict(const FilterState& f, double dt, const UkfParams& p) {
  const SigmaSet s = make_sigma_points(f, p);

  Eigen::Matrix<double, kN, kSigma> prop;
  for (int i = 0; i < kSigma; ++i) {
    prop.col(i) = ctrv_propagate(s.points.col(i), dt);
  }

  // Mean with the yaw treated circularly relative to the central point.
  StateVec mean = StateVec::Zero();
  const double ref = prop(2, 0);
  for (int i = 0; i < kSigma; ++i) {
    StateVec v = prop.col(i);
    v(2) = ref + wrap_angle(v(2) - ref);
    mean += s.wm(i) * v;
  }
  mean(2) = wrap_angle(mean(2));

  StateMat cov = StateMat::Zero();
  for (int i = 0; i < kSigma; ++i) {
    StateVec d = prop.col(i) - mean;
    d(2) = wrap_angle(d(2));
    cov += s.wc(i) * d * d.transpose();
  }
  cov += process_noise(mean, dt, p);
  cov = 0.5 * (cov + cov.transpose()).eval();

  return {mean, cov};
}

FilterState ukf_update(const FilterState& f, const MeasVec& z, const UkfParams& p) {
  const SigmaSet s = make_sigma_points(f, p);

  Eigen::Matrix<double, 3, kSigma> zs;
  for (int i = 0; i < kSigma; ++i) {
    zs(0, i) = s.points(0, i);
    zs(1, i) = s.points(1, i);
    zs(2, i) = s.points(2, i);
  }
  MeasVec z_pred = MeasVec::Zero();
  const double ref = zs(2, 0);
  for (int i = 0; i < kSigma; ++i) {
    MeasVec v = zs.col(i);
    v(2) = ref + wrap_angle(v(2) - ref);
    z_pred += s.wm(i) * v;
  }
  z_pred(2) = wrap_angle(z_pred(2));

  MeasMat innov_cov = MeasMat::Zero();
  Eigen::Matrix<double, kN, 3> cross = Eigen::Matrix<double, kN, 3>::Zero();
  for (int i = 0; i < kSigma; ++i) {
    MeasVec dz = zs.col(i) - z_pred;
    dz(2) = wrap_angle(dz(2));
    StateVec dx = s.points.col(i) - f.mean;
    dx(2) = wrap_angle(dx(2));
    innov_cov += s.wc(i) * dz * dz.transpose();
    cross += s.wc(i) * dx * dz.transpose();
  }
  MeasMat r = MeasMat::Zero();
  r(0, 0) = p.pos_sigma * p.pos_sigma;
  r(1, 1) = p.pos_sigma * p.pos_sigma;
  r(2, 2) = p.yaw_sigma * p.yaw_sigma;
  innov_cov += r;

  const Eigen::Matrix<double, kN, 3> gain = cross * innov_cov.inverse();
  MeasVec innovation = z - z_pred;
  innovation(2) = wrap_angle(innovation(2));

  FilterState out;
  out.mean = f.mean + gain * innovation;
  out.mean(2) = wrap_angle(out.mean(2));
  out.cov = f.cov - gain * innov_cov * gain.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

double nees(const FilterState& f, const StateVec& truth) {
  StateVec e = f.mean - truth;
  e(2) = wrap_angle(e(2));
  return e.transpose() * f.cov.inverse() * e;
}

}  // namespace drivesim
