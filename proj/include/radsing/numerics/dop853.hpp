#pragma once

// Explicit Dormand–Prince 8(5,3) integrator with event location by step bisection.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace radsing::numerics {

template <class Scalar, int Dim>
using Vec = Eigen::Matrix<Scalar, Dim, 1>;

template <class Scalar>
struct OdeOptions {
  Scalar rtol = Scalar(1e-10);
  Scalar atol = Scalar(1e-12);
  Scalar max_step = std::numeric_limits<Scalar>::infinity();
  // Step is also capped by max_step_rel * |t|.
  Scalar max_step_rel = std::numeric_limits<Scalar>::infinity();
  Scalar initial_step = Scalar(0);
  Scalar event_tol = Scalar(1e-12);
  std::size_t max_steps = 2000000;
};

enum class OdeStatus { Completed, EventHit, Stopped, StepUnderflow, MaxStepsExceeded };

template <class Scalar, int Dim>
struct OdeResult {
  OdeStatus status = OdeStatus::Completed;
  Scalar t{};
  Vec<Scalar, Dim> y;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
};

struct NoEvent {
  template <class Scalar, class Y>
  Scalar operator()(Scalar, const Y&) const {
    return Scalar(1);
  }
};

template <class Scalar, int Dim, class Rhs>
class Dop853 {
 public:
  using State = Vec<Scalar, Dim>;

  Dop853(Rhs rhs, Scalar rtol, Scalar atol) : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  State eval(Scalar t, const State& y) {
    ++calls_;
    return rhs_(t, y);
  }

  std::size_t calls() const { return calls_; }

  /// One step of size h from (t, y) with k1 = f(t, y). Returns the scaled error norm.
  Scalar step(Scalar t, const State& y, const State& k1, Scalar h, State& y_new) {
    const State k2 = eval(t + c2 * h, y + h * (a21 * k1));
    const State k3 = eval(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const State k4 = eval(t + c4 * h, y + h * (a41 * k1 + a43 * k3));
    const State k5 = eval(t + c5 * h, y + h * (a51 * k1 + a53 * k3 + a54 * k4));
    const State k6 = eval(t + c6 * h, y + h * (a61 * k1 + a64 * k4 + a65 * k5));
    const State k7 = eval(t + c7 * h, y + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6));
    const State k8 =
        eval(t + c8 * h, y + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7));
    const State k9 = eval(
        t + c9 * h, y + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8));
    const State k10 = eval(t + c10 * h, y + h * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 +
                                                 a107 * k7 + a108 * k8 + a109 * k9));
    const State k11 =
        eval(t + c11 * h, y + h * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7 +
                                   a118 * k8 + a119 * k9 + a1110 * k10));
    const State k12 =
        eval(t + h, y + h * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 +
                             a128 * k8 + a129 * k9 + a1210 * k10 + a1211 * k11));
    const State slope = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 +
                        b11 * k11 + b12 * k12;
    y_new = y + h * slope;

    Scalar err = 0, err2 = 0;
    for (int i = 0; i < y.size(); ++i) {
      using std::abs;
      const Scalar sk = Scalar(1) / (atol_ + rtol_ * std::max(abs(y[i]), abs(y_new[i])));
      Scalar e3 = (slope[i] - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i]) * sk;
      Scalar e5 = (er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] +
                   er10 * k10[i] + er11 * k11[i] + er12 * k12[i]) *
                  sk;
      err2 += e3 * e3;
      err += e5 * e5;
    }
    using std::abs;
    using std::sqrt;
    const Scalar n = Scalar(y.size());
    Scalar deno = err + Scalar(0.01) * err2;
    if (deno <= 0) deno = Scalar(1);
    return abs(h) * err / sqrt(deno * n);
  }

 private:
  Rhs rhs_;
  Scalar rtol_, atol_;
  std::size_t calls_ = 0;

  static constexpr Scalar c2 = Scalar(0.526001519587677318785587544488E-01);
  static constexpr Scalar c3 = Scalar(0.789002279381515978178381316732E-01);
  static constexpr Scalar c4 = Scalar(0.118350341907227396726757197510E+00);
  static constexpr Scalar c5 = Scalar(0.281649658092772603273242802490E+00);
  static constexpr Scalar c6 = Scalar(0.333333333333333333333333333333E+00);
  static constexpr Scalar c7 = Scalar(0.25E+00);
  static constexpr Scalar c8 = Scalar(0.307692307692307692307692307692E+00);
  static constexpr Scalar c9 = Scalar(0.651282051282051282051282051282E+00);
  static constexpr Scalar c10 = Scalar(0.6E+00);
  static constexpr Scalar c11 = Scalar(0.857142857142857142857142857142E+00);

  static constexpr Scalar b1 = Scalar(5.42937341165687622380535766363E-2);
  static constexpr Scalar b6 = Scalar(4.45031289275240888144113950566E0);
  static constexpr Scalar b7 = Scalar(1.89151789931450038304281599044E0);
  static constexpr Scalar b8 = Scalar(-5.8012039600105847814672114227E0);
  static constexpr Scalar b9 = Scalar(3.1116436695781989440891606237E-1);
  static constexpr Scalar b10 = Scalar(-1.52160949662516078556178806805E-1);
  static constexpr Scalar b11 = Scalar(2.01365400804030348374776537501E-1);
  static constexpr Scalar b12 = Scalar(4.47106157277725905176885569043E-2);

  static constexpr Scalar a21 = Scalar(5.26001519587677318785587544488E-2);
  static constexpr Scalar a31 = Scalar(1.97250569845378994544595329183E-2);
  static constexpr Scalar a32 = Scalar(5.91751709536136983633785987549E-2);
  static constexpr Scalar a41 = Scalar(2.95875854768068491816892993775E-2);
  static constexpr Scalar a43 = Scalar(8.87627564304205475450678981324E-2);
  static constexpr Scalar a51 = Scalar(2.41365134159266685502369798665E-1);
  static constexpr Scalar a53 = Scalar(-8.84549479328286085344864962717E-1);
  static constexpr Scalar a54 = Scalar(9.24834003261792003115737966543E-1);
  static constexpr Scalar a61 = Scalar(3.7037037037037037037037037037E-2);
  static constexpr Scalar a64 = Scalar(1.70828608729473871279604482173E-1);
  static constexpr Scalar a65 = Scalar(1.25467687566822425016691814123E-1);
  static constexpr Scalar a71 = Scalar(3.7109375E-2);
  static constexpr Scalar a74 = Scalar(1.70252211019544039314978060272E-1);
  static constexpr Scalar a75 = Scalar(6.02165389804559606850219397283E-2);
  static constexpr Scalar a76 = Scalar(-1.7578125E-2);
  static constexpr Scalar a81 = Scalar(3.70920001185047927108779319836E-2);
  static constexpr Scalar a84 = Scalar(1.70383925712239993810214054705E-1);
  static constexpr Scalar a85 = Scalar(1.07262030446373284651809199168E-1);
  static constexpr Scalar a86 = Scalar(-1.53194377486244017527936158236E-2);
  static constexpr Scalar a87 = Scalar(8.27378916381402288758473766002E-3);
  static constexpr Scalar a91 = Scalar(6.24110958716075717114429577812E-1);
  static constexpr Scalar a94 = Scalar(-3.36089262944694129406857109825E0);
  static constexpr Scalar a95 = Scalar(-8.68219346841726006818189891453E-1);
  static constexpr Scalar a96 = Scalar(2.75920996994467083049415600797E1);
  static constexpr Scalar a97 = Scalar(2.01540675504778934086186788979E1);
  static constexpr Scalar a98 = Scalar(-4.34898841810699588477366255144E1);
  static constexpr Scalar a101 = Scalar(4.77662536438264365890433908527E-1);
  static constexpr Scalar a104 = Scalar(-2.48811461997166764192642586468E0);
  static constexpr Scalar a105 = Scalar(-5.90290826836842996371446475743E-1);
  static constexpr Scalar a106 = Scalar(2.12300514481811942347288949897E1);
  static constexpr Scalar a107 = Scalar(1.52792336328824235832596922938E1);
  static constexpr Scalar a108 = Scalar(-3.32882109689848629194453265587E1);
  static constexpr Scalar a109 = Scalar(-2.03312017085086261358222928593E-2);
  static constexpr Scalar a111 = Scalar(-9.3714243008598732571704021658E-1);
  static constexpr Scalar a114 = Scalar(5.18637242884406370830023853209E0);
  static constexpr Scalar a115 = Scalar(1.09143734899672957818500254654E0);
  static constexpr Scalar a116 = Scalar(-8.14978701074692612513997267357E0);
  static constexpr Scalar a117 = Scalar(-1.85200656599969598641566180701E1);
  static constexpr Scalar a118 = Scalar(2.27394870993505042818970056734E1);
  static constexpr Scalar a119 = Scalar(2.49360555267965238987089396762E0);
  static constexpr Scalar a1110 = Scalar(-3.0467644718982195003823669022E0);
  static constexpr Scalar a121 = Scalar(2.27331014751653820792359768449E0);
  static constexpr Scalar a124 = Scalar(-1.05344954667372501984066689879E1);
  static constexpr Scalar a125 = Scalar(-2.00087205822486249909675718444E0);
  static constexpr Scalar a126 = Scalar(-1.79589318631187989172765950534E1);
  static constexpr Scalar a127 = Scalar(2.79488845294199600508499808837E1);
  static constexpr Scalar a128 = Scalar(-2.85899827713502369474065508674E0);
  static constexpr Scalar a129 = Scalar(-8.87285693353062954433549289258E0);
  static constexpr Scalar a1210 = Scalar(1.23605671757943030647266201528E1);
  static constexpr Scalar a1211 = Scalar(6.43392746015763530355970484046E-1);

  static constexpr Scalar bhh1 = Scalar(0.244094488188976377952755905512E+00);
  static constexpr Scalar bhh2 = Scalar(0.733846688281611857341361741547E+00);
  static constexpr Scalar bhh3 = Scalar(0.220588235294117647058823529412E-01);
  static constexpr Scalar er1 = Scalar(0.1312004499419488073250102996E-01);
  static constexpr Scalar er6 = Scalar(-0.1225156446376204440720569753E+01);
  static constexpr Scalar er7 = Scalar(-0.4957589496572501915214079952E+00);
  static constexpr Scalar er8 = Scalar(0.1664377182454986536961530415E+01);
  static constexpr Scalar er9 = Scalar(-0.3503288487499736816886487290E+00);
  static constexpr Scalar er10 = Scalar(0.3341791187130174790297318841E+00);
  static constexpr Scalar er11 = Scalar(0.8192320648511571246570742613E-01);
  static constexpr Scalar er12 = Scalar(-0.2235530786388629525884427845E-01);
};

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0). `observer(t, y, dy)` sees every accepted
/// point including the initial one and may return false to stop. `event(t, y)` is watched for
/// sign changes; the crossing is located by bisection of the last step size.
template <class Scalar, int Dim, class Rhs, class Observer, class Event = NoEvent>
OdeResult<Scalar, Dim> integrate_dop853(Rhs rhs, Scalar t0, const Vec<Scalar, Dim>& y0,
                                        Scalar t1, const OdeOptions<Scalar>& opt,
                                        Observer&& observer, Event event = Event{}) {
  using std::abs;
  using std::pow;
  using State = Vec<Scalar, Dim>;
  Dop853<Scalar, Dim, Rhs> rk(std::move(rhs), opt.rtol, opt.atol);

  OdeResult<Scalar, Dim> res;
  Scalar t = t0;
  State y = y0;
  State k1 = rk.eval(t, y);
  Scalar g = event(t, y);
  // Starting on the event surface does not count as a crossing.
  if (abs(g) <= opt.event_tol) g = Scalar(0);
  auto finish = [&](OdeStatus s) {
    res.status = s;
    res.t = t;
    res.y = y;
    res.rhs_calls = rk.calls();
    return res;
  };
  if (!observer(t, y, k1)) return finish(OdeStatus::Stopped);
  if (!(t1 > t0)) return finish(OdeStatus::Completed);

  auto cap = [&](Scalar tt) {
    Scalar m = std::min(opt.max_step, t1 - t0);
    if (std::isfinite(double(opt.max_step_rel))) m = std::min(m, opt.max_step_rel * abs(tt));
    return m;
  };

  Scalar h = opt.initial_step;
  if (!(h > 0)) {
    // Hairer's starting-step heuristic.
    Scalar dnf = 0, dny = 0;
    for (int i = 0; i < y.size(); ++i) {
      const Scalar sk = opt.atol + opt.rtol * abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= Scalar(1e-10) || dny <= Scalar(1e-10)) ? Scalar(1e-6)
                                                         : Scalar(0.01) * std::sqrt(dny / dnf);
    h = std::min(h, cap(t));
    State y1 = y + h * k1;
    State k2 = rk.eval(t + h, y1);
    Scalar der2 = 0;
    for (int i = 0; i < y.size(); ++i) {
      const Scalar sk = opt.atol + opt.rtol * abs(y[i]);
      der2 += ((k2[i] - k1[i]) / sk) * ((k2[i] - k1[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const Scalar der12 = std::max(abs(der2), std::sqrt(dnf));
    const Scalar h1 = der12 <= Scalar(1e-15) ? std::max(Scalar(1e-6), abs(h) * Scalar(1e-3))
                                             : pow(Scalar(0.01) / der12, Scalar(1) / Scalar(8));
    h = std::min({Scalar(100) * abs(h), h1, cap(t)});
  }

  const Scalar safe = Scalar(0.9), facc1 = Scalar(1) / Scalar(0.333), facc2 = Scalar(1) / Scalar(6);
  const Scalar expo1 = Scalar(1) / Scalar(8);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  bool reject = false;
  State y_new;

  while (true) {
    if (res.accepted + res.rejected >= opt.max_steps) return finish(OdeStatus::MaxStepsExceeded);
    h = std::min(h, cap(t));
    if (Scalar(0.1) * abs(h) <= abs(t) * eps || !(h > 0)) return finish(OdeStatus::StepUnderflow);
    bool last = false;
    if (t + Scalar(1.01) * h >= t1) {
      h = t1 - t;
      last = true;
    }
    const Scalar err = rk.step(t, y, k1, h, y_new);
    if (!std::isfinite(double(err))) {
      h *= Scalar(0.25);
      reject = true;
      ++res.rejected;
      continue;
    }
    Scalar fac = pow(err, expo1);
    fac = std::max(facc2, std::min(facc1, fac / safe));
    Scalar h_new = h / fac;
    if (err > Scalar(1)) {
      h = h / std::min(facc1, pow(err, expo1) / safe);
      reject = true;
      ++res.rejected;
      continue;
    }
    ++res.accepted;
    const Scalar t_new = last ? t1 : t + h;
    const Scalar g_new = event(t_new, y_new);
    if ((g > 0 && g_new <= 0) || (g < 0 && g_new >= 0)) {
      // Bisect on the step length from the accepted left point.
      Scalar lo = 0, hi = h;
      State y_hi = y_new, y_try;
      Scalar g_hi = g_new;
      for (int it = 0; it < 200; ++it) {
        if (abs(g_hi) <= opt.event_tol || hi - lo <= Scalar(4) * eps * std::max(abs(t), Scalar(1)))
          break;
        const Scalar mid = Scalar(0.5) * (lo + hi);
        rk.step(t, y, k1, mid, y_try);
        const Scalar gm = event(t + mid, y_try);
        if ((g > 0 && gm <= 0) || (g < 0 && gm >= 0)) {
          hi = mid;
          y_hi = y_try;
          g_hi = gm;
        } else {
          lo = mid;
        }
      }
      t = t + hi;
      y = y_hi;
      k1 = rk.eval(t, y);
      observer(t, y, k1);
      return finish(OdeStatus::EventHit);
    }
    t = t_new;
    y = y_new;
    g = g_new;
    k1 = rk.eval(t, y);
    if (!observer(t, y, k1)) return finish(OdeStatus::Stopped);
    if (last) return finish(OdeStatus::Completed);
    if (reject) h_new = std::min(h_new, h);
    reject = false;
    h = h_new;
  }
}

}  // namespace radsing::numerics
