#pragma once

#include <cmath>
#include <cstdint>

#include "heisen/skew.hpp"

namespace heisen::flow {

using bundle::SkewProduct;
using skew::SkewPoint;

/// Point of the bundle in rectangle coordinates: current symbol, horizontal
/// position within the symbol's interval, elapsed height s in [0, h_a), and
/// fiber coordinate rho.
struct FlowState {
  int symbol = 0;
  double x = 0;
  double s = 0;
  double rho = 0;
};

struct FlowResult {
  FlowState state;
  bool nearDiscontinuity = false;
};

inline FlowState stateOnSection(const SkewProduct& sp, double x, double rho) {
  FlowState st;
  st.symbol = sp.base.symbolAt(x);
  st.x = x;
  st.s = 0;
  st.rho = rho;
  return st;
}

/// Vertical flow for time t (either sign). Within a rectangle the gauge is
/// the per-rectangle connection form (x - dI_a) dy, so ds/dt = 1 and
/// drho/dt = x - dI_a; crossing the roof applies the base return and the
/// crossing offset b_a, crossing the floor applies their inverses.
inline FlowResult flowVertical(const SkewProduct& sp, FlowState st, double t) {
  FlowResult out;
  const auto rate = [&](const FlowState& f) {
    return f.x - sp.base.breakpoints[f.symbol];
  };
  while (t > 0) {
    const double leg = sp.slopes[st.symbol] - st.s;
    if (t < leg) {
      st.rho = wrap01(st.rho + t * rate(st));
      st.s += t;
      break;
    }
    // ride to the roof, cross
    st.rho = wrap01(st.rho + leg * rate(st) + sp.offsets[st.symbol]);
    t -= leg;
    auto base = iet::ietApply(sp.base, st.x);
    if (base.nearDiscontinuity) out.nearDiscontinuity = true;
    st.x = base.value;
    st.symbol = sp.base.symbolAt(st.x);
    st.s = 0;
    if (t == 0) break;
  }
  if (t < 0) {
    const iet::IetMap<double> invBase = iet::inverseMap(sp.base);
    while (t < 0) {
      if (st.s > 0) {
        const double leg = std::min(-t, st.s);
        st.rho = wrap01(st.rho - leg * rate(st));
        st.s -= leg;
        t += leg;
        continue;
      }
      // cross the floor: undo the previous return
      auto back = iet::ietApply(invBase, st.x);
      if (back.nearDiscontinuity) out.nearDiscontinuity = true;
      const int prev = sp.base.symbolAt(back.value);
      st.x = back.value;
      st.symbol = prev;
      st.s = sp.slopes[prev];
      st.rho = wrap01(st.rho - sp.offsets[prev]);
    }
  }
  out.state = st;
  return out;
}

/// Fiber rotation; commutes with everything.
inline FlowState flowFiber(FlowState st, double t) {
  st.rho = wrap01(st.rho + t);
  return st;
}

/// Horizontal motion within the current chart. The chosen gauge has no
/// connection component in the horizontal direction, so rho is untouched.
inline FlowState flowHorizontal(const SkewProduct& sp, FlowState st, double t) {
  const double lo = sp.base.breakpoints[st.symbol];
  const double hi = lo + sp.base.spec.lengths[st.symbol];
  const double nx = st.x + t;
  if (nx < lo || nx >= hi)
    throw Error(Err::ChartExit, "horizontal motion leaves the rectangle");
  st.x = nx;
  return st;
}

/// Net fiber shift of the commutator word: the four legs of the display,
/// executed in reading order (horizontal -t, vertical -t, horizontal +t,
/// vertical +t), traverse the side-t square left of and below the state
/// counterclockwise; the shift equals the enclosed area t^2 mod 1.
inline double commutatorShift(const SkewProduct& sp, const FlowState& st,
                              double t) {
  const double lo = sp.base.breakpoints[st.symbol];
  if (st.x - t < lo || st.s - t < 0)
    throw Error(Err::ChartExit, "commutator square leaves the rectangle");
  const double rho0 = st.rho;
  FlowState cur = st;
  cur = flowHorizontal(sp, cur, -t);
  cur = flowVertical(sp, cur, -t).state;
  cur = flowHorizontal(sp, cur, t);
  cur = flowVertical(sp, cur, t).state;
  return wrap01(cur.rho - rho0);
}

struct ReturnResult {
  SkewPoint point;
  double time = 0;
  bool nearDiscontinuity = false;
};

/// First return of the vertical flow to the cross-section; the return time
/// is the piecewise-constant roof h_a.
inline ReturnResult firstReturn(const SkewProduct& sp, const FlowState& st) {
  if (st.s != 0)
    throw Error(Err::ValidationError, "first return starts on the section");
  const double roof = sp.slopes[st.symbol];
  FlowResult r = flowVertical(sp, st, roof);
  ReturnResult out;
  out.point = SkewPoint{r.state.x, r.state.rho};
  out.time = roof;
  out.nearDiscontinuity = r.nearDiscontinuity;
  return out;
}

/// Left-edge transported offsets: parallel transport of (dI_a, 0) to its
/// first return. Feeds the orbit-constraint holonomy oracle with values
/// produced by the flow rather than read from the parameters.
inline Eigen::VectorXd transportedOffsets(const SkewProduct& sp) {
  const int d = sp.size();
  Eigen::VectorXd out(d);
  for (int a = 0; a < d; ++a) {
    FlowState st = stateOnSection(sp, sp.base.breakpoints[a], 0.0);
    out[a] = firstReturn(sp, st).point.rho;
  }
  return out;
}

}  // namespace heisen::flow
