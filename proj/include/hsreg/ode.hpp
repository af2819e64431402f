#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace hsreg::ode {

/// Explicit Runge-Kutta pair of order 8 with embedded 5th and 3rd order error
/// estimators and a 7th order continuous extension (Dormand-Prince 8(5,3)).
/// The caller drives the integration one accepted step at a time.
template <std::size_t N>
class Dop853 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_init = 0.0;  ///< 0 selects a starting step automatically
    double safety = 0.9;
    double fac_min = 0.333;
    double fac_max = 6.0;
  };

  /// Continuous extension over one accepted step [x0, x0 + h].
  struct Segment {
    double x0 = 0.0;
    double h = 0.0;
    std::array<State, 8> r{};

    double x1() const { return x0 + h; }

    State value(double x) const {
      const double s = (x - x0) / h;
      const double s1 = 1.0 - s;
      State out;
      for (std::size_t i = 0; i < N; ++i) {
        const double a6 = r[6][i] + s * r[7][i];
        const double a5 = r[5][i] + a6 * s1;
        const double a4 = r[4][i] + a5 * s;
        const double a3 = r[3][i] + a4 * s1;
        const double a2 = r[2][i] + a3 * s;
        const double a1 = r[1][i] + a2 * s1;
        out[i] = r[0][i] + s * a1;
      }
      return out;
    }

    State derivative(double x) const {
      const double s = (x - x0) / h;
      const double s1 = 1.0 - s;
      State out;
      for (std::size_t i = 0; i < N; ++i) {
        const double a6 = r[6][i] + s * r[7][i];
        const double a5 = r[5][i] + a6 * s1;
        const double a4 = r[4][i] + a5 * s;
        const double a3 = r[3][i] + a4 * s1;
        const double a2 = r[2][i] + a3 * s;
        const double a1 = r[1][i] + a2 * s1;
        const double d6 = r[7][i];
        const double d5 = -a6 + s1 * d6;
        const double d4 = a5 + s * d5;
        const double d3 = -a4 + s1 * d4;
        const double d2 = a3 + s * d3;
        const double d1 = -a2 + s1 * d2;
        out[i] = (a1 + s * d1) / h;
      }
      return out;
    }
  };

  Dop853(Rhs f, double x0, const State& y0, double direction, Options opt)
      : f_(std::move(f)), opt_(opt), x_(x0), y_(y0), dir_(direction < 0 ? -1.0 : 1.0) {
    f_(x_, y_, k1_);
    h_ = opt_.h_init > 0.0 ? opt_.h_init : initial_step();
  }

  double x() const { return x_; }
  const State& y() const { return y_; }
  const State& dy() const { return k1_; }
  /// Magnitude of the step to be attempted next.
  double step_size() const { return h_; }
  const Segment& segment() const { return segment_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }

  /// Attempts steps until one is accepted, never passing x_end.
  /// Returns false if the step size would drop below h_min.
  bool step(double x_end, double h_min) {
    bool last_rejected = false;
    for (;;) {
      const double remaining = std::abs(x_end - x_);
      bool last = false;
      double h = h_;
      if (h >= remaining) {
        h = remaining;
        last = true;
      }
      if (h < h_min && !last) return false;
      const double hs = dir_ * h;

      State y_new;
      const double err = attempt(hs, y_new);
      if (!std::isfinite(err)) {
        h_ = 0.25 * h;
        ++rejected_;
        last_rejected = true;
        continue;
      }
      const double fac11 = std::pow(err, 0.125);
      if (err <= 1.0) {
        double fac = std::clamp(fac11 / opt_.safety, 1.0 / opt_.fac_max, 1.0 / opt_.fac_min);
        double h_next = h / fac;
        if (last_rejected) h_next = std::min(h_next, h);
        build_segment(hs, y_new);
        x_ = last ? x_end : x_ + hs;
        y_ = y_new;
        k1_ = k_[12];
        if (!last) h_ = h_next;
        ++accepted_;
        return true;
      }
      h_ = h / std::min(1.0 / opt_.fac_min, fac11 / opt_.safety);
      ++rejected_;
      last_rejected = true;
    }
  }

 private:
  double scale(std::size_t i, const State& a, const State& b) const {
    return opt_.atol + opt_.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
  }

  double initial_step() {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y_[i]);
      d0 += (y_[i] / sk) * (y_[i] / sk);
      d1 += (k1_[i] / sk) * (k1_[i] / sk);
    }
    double h0 = (d0 <= 1e-10 || d1 <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1);
    State y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + dir_ * h0 * k1_[i];
    f_(x_ + dir_ * h0, y1, f1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::abs(y_[i]);
      d2 += ((f1[i] - k1_[i]) / sk) * ((f1[i] - k1_[i]) / sk);
    }
    d2 = std::sqrt(d2) / h0;
    const double dmax = std::max(std::sqrt(d1), d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.125);
    return std::min(100.0 * h0, h1);
  }

  // Fills k_[1..12] (k_[0] = k1_) and k_[12] = f(x + h, y_new); returns the scaled error.
  double attempt(double h, State& y_new) {
    auto& k = k_;
    k[0] = k1_;
    State w;
    auto stage = [&](int idx, double c, std::initializer_list<std::pair<int, double>> a) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (const auto& [j, aj] : a) acc += aj * k[j][i];
        w[i] = y_[i] + h * acc;
      }
      f_(x_ + c * h, w, k[idx]);
    };
    stage(1, c2, {{0, a21}});
    stage(2, c3, {{0, a31}, {1, a32}});
    stage(3, c4, {{0, a41}, {2, a43}});
    stage(4, c5, {{0, a51}, {2, a53}, {3, a54}});
    stage(5, c6, {{0, a61}, {3, a64}, {4, a65}});
    stage(6, c7, {{0, a71}, {3, a74}, {4, a75}, {5, a76}});
    stage(7, c8, {{0, a81}, {3, a84}, {4, a85}, {5, a86}, {6, a87}});
    stage(8, c9, {{0, a91}, {3, a94}, {4, a95}, {5, a96}, {6, a97}, {7, a98}});
    stage(9, c10, {{0, a101}, {3, a104}, {4, a105}, {5, a106}, {6, a107}, {7, a108}, {8, a109}});
    stage(10, c11, {{0, a111}, {3, a114}, {4, a115}, {5, a116}, {6, a117}, {7, a118}, {8, a119}, {9, a1110}});
    stage(11, 1.0,
          {{0, a121}, {3, a124}, {4, a125}, {5, a126}, {6, a127}, {7, a128}, {8, a129}, {9, a1210}, {10, a1211}});

    State incr;
    for (std::size_t i = 0; i < N; ++i) {
      incr[i] = b1 * k[0][i] + b6 * k[5][i] + b7 * k[6][i] + b8 * k[7][i] + b9 * k[8][i] + b10 * k[9][i] +
                b11 * k[10][i] + b12 * k[11][i];
      y_new[i] = y_[i] + h * incr[i];
    }
    f_(x_ + h, y_new, k[12]);

    double err5 = 0.0, err3 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = scale(i, y_, y_new);
      const double e3 = incr[i] - e31 * k[0][i] - e32 * k[8][i] - e33 * k[11][i];
      const double e5 = e51 * k[0][i] + e56 * k[5][i] + e57 * k[6][i] + e58 * k[7][i] + e59 * k[8][i] +
                        e510 * k[9][i] + e511 * k[10][i] + e512 * k[11][i];
      err3 += (e3 / sk) * (e3 / sk);
      err5 += (e5 / sk) * (e5 / sk);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    return std::abs(h) * err5 / std::sqrt(static_cast<double>(N) * deno);
  }

  void build_segment(double h, const State& y_new) {
    auto& k = k_;
    State w;
    auto stage = [&](int idx, double c, std::initializer_list<std::pair<int, double>> a) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (const auto& [j, aj] : a) acc += aj * k[j][i];
        w[i] = y_[i] + h * acc;
      }
      f_(x_ + c * h, w, k[idx]);
    };
    stage(13, c14, {{0, a141}, {6, a147}, {7, a148}, {8, a149}, {9, a1410}, {10, a1411}, {11, a1412}, {12, a1413}});
    stage(14, c15, {{0, a151}, {5, a156}, {6, a157}, {7, a158}, {10, a1511}, {11, a1512}, {12, a1513}, {13, a1514}});
    stage(15, c16, {{0, a161}, {5, a166}, {6, a167}, {7, a168}, {8, a169}, {12, a1613}, {13, a1614}, {14, a1615}});

    Segment& s = segment_;
    s.x0 = x_;
    s.h = h;
    for (std::size_t i = 0; i < N; ++i) {
      s.r[0][i] = y_[i];
      s.r[1][i] = y_new[i] - y_[i];
      s.r[2][i] = h * k[0][i] - s.r[1][i];
      s.r[3][i] = s.r[1][i] - h * k[12][i] - s.r[2][i];
      auto combo = [&](const std::array<double, 12>& d) {
        const int idx[12] = {0, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
        double acc = 0.0;
        for (int j = 0; j < 12; ++j) acc += d[static_cast<std::size_t>(j)] * k[idx[j]][i];
        return h * acc;
      };
      s.r[4][i] = combo({d41, d46, d47, d48, d49, d410, d411, d412, d413, d414, d415, d416});
      s.r[5][i] = combo({d51, d56, d57, d58, d59, d510, d511, d512, d513, d514, d515, d516});
      s.r[6][i] = combo({d61, d66, d67, d68, d69, d610, d611, d612, d613, d614, d615, d616});
      s.r[7][i] = combo({d71, d76, d77, d78, d79, d710, d711, d712, d713, d714, d715, d716});
    }
  }

  Rhs f_;
  Options opt_;
  double x_;
  State y_;
  State k1_{};
  double dir_;
  double h_ = 0.0;
  std::array<State, 16> k_{};
  Segment segment_{};
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;

  static constexpr double c2 = 0.526001519587677318785587544488e-01;
  static constexpr double c3 = 0.789002279381515978178381316732e-01;
  static constexpr double c4 = 0.118350341907227396726757197510e+00;
  static constexpr double c5 = 0.281649658092772603273242802490e+00;
  static constexpr double c6 = 0.333333333333333333333333333333e+00;
  static constexpr double c7 = 0.25e+00;
  static constexpr double c8 = 0.307692307692307692307692307692e+00;
  static constexpr double c9 = 0.651282051282051282051282051282e+00;
  static constexpr double c10 = 0.6e+00;
  static constexpr double c11 = 0.857142857142857142857142857142e+00;
  static constexpr double c14 = 0.1e+00;
  static constexpr double c15 = 0.2e+00;
  static constexpr double c16 = 0.777777777777777777777777777778e+00;

  static constexpr double a21 = 5.26001519587677318785587544488e-2;
  static constexpr double a31 = 1.97250569845378994544595329183e-2;
  static constexpr double a32 = 5.91751709536136983633785987549e-2;
  static constexpr double a41 = 2.95875854768068491816892993775e-2;
  static constexpr double a43 = 8.87627564304205475450678981324e-2;
  static constexpr double a51 = 2.41365134159266685502369798665e-1;
  static constexpr double a53 = -8.84549479328286085344864962717e-1;
  static constexpr double a54 = 9.24834003261792003115737966543e-1;
  static constexpr double a61 = 3.7037037037037037037037037037e-2;
  static constexpr double a64 = 1.70828608729473871279604482173e-1;
  static constexpr double a65 = 1.25467687566822425016691814123e-1;
  static constexpr double a71 = 3.7109375e-2;
  static constexpr double a74 = 1.70252211019544039314978060272e-1;
  static constexpr double a75 = 6.02165389804559606850219397283e-2;
  static constexpr double a76 = -1.7578125e-2;
  static constexpr double a81 = 3.70920001185047927108779319836e-2;
  static constexpr double a84 = 1.70383925712239993810214054705e-1;
  static constexpr double a85 = 1.07262030446373284651809199168e-1;
  static constexpr double a86 = -1.53194377486244017527936158236e-2;
  static constexpr double a87 = 8.27378916381402288758473766002e-3;
  static constexpr double a91 = 6.24110958716075717114429577812e-1;
  static constexpr double a94 = -3.36089262944694129406857109825e0;
  static constexpr double a95 = -8.68219346841726006818189891453e-1;
  static constexpr double a96 = 2.75920996994467083049415600797e1;
  static constexpr double a97 = 2.01540675504778934086186788979e1;
  static constexpr double a98 = -4.34898841810699588477366255144e1;
  static constexpr double a101 = 4.77662536438264365890433908527e-1;
  static constexpr double a104 = -2.48811461997166764192642586468e0;
  static constexpr double a105 = -5.90290826836842996371446475743e-1;
  static constexpr double a106 = 2.12300514481811942347288949897e1;
  static constexpr double a107 = 1.52792336328824235832596922938e1;
  static constexpr double a108 = -3.32882109689848629194453265587e1;
  static constexpr double a109 = -2.03312017085086261358222928593e-2;
  static constexpr double a111 = -9.3714243008598732571704021658e-1;
  static constexpr double a114 = 5.18637242884406370830023853209e0;
  static constexpr double a115 = 1.09143734899672957818500254654e0;
  static constexpr double a116 = -8.14978701074692612513997267357e0;
  static constexpr double a117 = -1.85200656599969598641566180701e1;
  static constexpr double a118 = 2.27394870993505042818970056734e1;
  static constexpr double a119 = 2.49360555267965238987089396762e0;
  static constexpr double a1110 = -3.0467644718982195003823669022e0;
  static constexpr double a121 = 2.27331014751653820792359768449e0;
  static constexpr double a124 = -1.05344954667372501984066689879e1;
  static constexpr double a125 = -2.00087205822486249909675718444e0;
  static constexpr double a126 = -1.79589318631187989172765950534e1;
  static constexpr double a127 = 2.79488845294199600508499808837e1;
  static constexpr double a128 = -2.85899827713502369474065508674e0;
  static constexpr double a129 = -8.87285693353062954433549289258e0;
  static constexpr double a1210 = 1.23605671757943030647266201528e1;
  static constexpr double a1211 = 6.43392746015763530355970484046e-1;

  static constexpr double a141 = 5.61675022830479523392909219681e-2;
  static constexpr double a147 = 2.53500210216624811088794765333e-1;
  static constexpr double a148 = -2.46239037470802489917441475441e-1;
  static constexpr double a149 = -1.24191423263816360469010140626e-1;
  static constexpr double a1410 = 1.5329179827876569731206322685e-1;
  static constexpr double a1411 = 8.20105229563468988491666602057e-3;
  static constexpr double a1412 = 7.56789766054569976138603589584e-3;
  static constexpr double a1413 = -8.298e-3;
  static constexpr double a151 = 3.18346481635021405060768473261e-2;
  static constexpr double a156 = 2.83009096723667755288322961402e-2;
  static constexpr double a157 = 5.35419883074385676223797384372e-2;
  static constexpr double a158 = -5.49237485713909884646569340306e-2;
  static constexpr double a1511 = -1.08347328697249322858509316994e-4;
  static constexpr double a1512 = 3.82571090835658412954920192323e-4;
  static constexpr double a1513 = -3.40465008687404560802977114492e-4;
  static constexpr double a1514 = 1.41312443674632500278074618366e-1;
  static constexpr double a161 = -4.28896301583791923408573538692e-1;
  static constexpr double a166 = -4.69762141536116384314449447206e0;
  static constexpr double a167 = 7.68342119606259904184240953878e0;
  static constexpr double a168 = 4.06898981839711007970213554331e0;
  static constexpr double a169 = 3.56727187455281109270669543021e-1;
  static constexpr double a1613 = -1.39902416515901462129418009734e-3;
  static constexpr double a1614 = 2.9475147891527723389556272149e0;
  static constexpr double a1615 = -9.15095847217987001081870187138e0;

  static constexpr double b1 = 5.42937341165687622380535766363e-2;
  static constexpr double b6 = 4.45031289275240888144113950566e0;
  static constexpr double b7 = 1.89151789931450038304281599044e0;
  static constexpr double b8 = -5.8012039600105847814672114227e0;
  static constexpr double b9 = 3.1116436695781989440891606237e-1;
  static constexpr double b10 = -1.52160949662516078556178806805e-1;
  static constexpr double b11 = 2.01365400804030348374776537501e-1;
  static constexpr double b12 = 4.47106157277725905176885569043e-2;

  static constexpr double e31 = 0.244094488188976377952755905512e+00;
  static constexpr double e32 = 0.733846688281611857341361741547e+00;
  static constexpr double e33 = 0.220588235294117647058823529412e-01;

  static constexpr double e51 = 0.1312004499419488073250102996e-01;
  static constexpr double e56 = -0.1225156446376204440720569753e+01;
  static constexpr double e57 = -0.4957589496572501915214079952e+00;
  static constexpr double e58 = 0.1664377182454986536961530415e+01;
  static constexpr double e59 = -0.3503288487499736816886487290e+00;
  static constexpr double e510 = 0.3341791187130174790297318841e+00;
  static constexpr double e511 = 0.8192320648511571246570742613e-01;
  static constexpr double e512 = -0.2235530786388629525884427845e-01;

  static constexpr double d41 = -0.84289382761090128651353491142e+01;
  static constexpr double d46 = 0.56671495351937776962531783590e+00;
  static constexpr double d47 = -0.30689499459498916912797304727e+01;
  static constexpr double d48 = 0.23846676565120698287728149680e+01;
  static constexpr double d49 = 0.21170345824450282767155149946e+01;
  static constexpr double d410 = -0.87139158377797299206789907490e+00;
  static constexpr double d411 = 0.22404374302607882758541771650e+01;
  static constexpr double d412 = 0.63157877876946881815570249290e+00;
  static constexpr double d413 = -0.88990336451333310820698117400e-01;
  static constexpr double d414 = 0.18148505520854727256656404962e+02;
  static constexpr double d415 = -0.91946323924783554000451984436e+01;
  static constexpr double d416 = -0.44360363875948939664310572000e+01;
  static constexpr double d51 = 0.10427508642579134603413151009e+02;
  static constexpr double d56 = 0.24228349177525818288430175319e+03;
  static constexpr double d57 = 0.16520045171727028198505394887e+03;
  static constexpr double d58 = -0.37454675472269020279518312152e+03;
  static constexpr double d59 = -0.22113666853125306036270938578e+02;
  static constexpr double d510 = 0.77334326684722638389603898808e+01;
  static constexpr double d511 = -0.30674084731089398182061213626e+02;
  static constexpr double d512 = -0.93321305264302278729567221706e+01;
  static constexpr double d513 = 0.15697238121770843886131091075e+02;
  static constexpr double d514 = -0.31139403219565177677282850411e+02;
  static constexpr double d515 = -0.93529243588444783865713862664e+01;
  static constexpr double d516 = 0.35816841486394083752465898540e+02;
  static constexpr double d61 = 0.19985053242002433820987653617e+02;
  static constexpr double d66 = -0.38703730874935176555105901742e+03;
  static constexpr double d67 = -0.18917813819516756882830838328e+03;
  static constexpr double d68 = 0.52780815920542364900561016686e+03;
  static constexpr double d69 = -0.11573902539959630126141871134e+02;
  static constexpr double d610 = 0.68812326946963000169666922661e+01;
  static constexpr double d611 = -0.10006050966910838403183860980e+01;
  static constexpr double d612 = 0.77771377980534432092869265740e+00;
  static constexpr double d613 = -0.27782057523535084065932004339e+01;
  static constexpr double d614 = -0.60196695231264120758267380846e+02;
  static constexpr double d615 = 0.84320405506677161018159903784e+02;
  static constexpr double d616 = 0.11992291136182789328035130030e+02;
  static constexpr double d71 = -0.25693933462703749003312586129e+02;
  static constexpr double d76 = -0.15418974869023643374053993627e+03;
  static constexpr double d77 = -0.23152937917604549567536039109e+03;
  static constexpr double d78 = 0.35763911791061412378285349910e+03;
  static constexpr double d79 = 0.93405324183624310003907691704e+02;
  static constexpr double d710 = -0.37458323136451633156875139351e+02;
  static constexpr double d711 = 0.10409964950896230045147246184e+03;
  static constexpr double d712 = 0.29840293426660503123344363579e+02;
  static constexpr double d713 = -0.43533456590011143754432175058e+02;
  static constexpr double d714 = 0.96324553959188282948394950600e+02;
  static constexpr double d715 = -0.39177261675615439165231486172e+02;
  static constexpr double d716 = -0.14972683625798562581422125276e+03;
};

}  // namespace hsreg::ode
