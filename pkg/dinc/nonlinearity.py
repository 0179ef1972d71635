# -*- coding: utf-8 -*-
"""Locally essentially bounded nonlinearities represented as piecewise
polynomials with finitely many jump discontinuities.

Values on breakpoints are never stored: the function is known almost
everywhere through its segments, so the Clarke envelopes g-/g+ at a
breakpoint are the smaller/larger one-sided limit. Potentials
G(t) = int_0^t g and their suprema over [-gamma, gamma] are exact.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from dinc.errors import (InconsistentDeclaration, InvalidNonlinearity,
                         UndeclaredAsymptotics, ValidationError)
from dinc.mixins import JsonMixin
from dinc.utils import log_grid, real_roots_in

__author__ = 'pydinc developers'
__all__ = ['AsymptoticBound', 'PiecewiseNonlinearity', 'WeightVector',
           'constant', 'linear', 'truncated_power', 'step', 'eval',
           'envelope_minus', 'envelope_plus', 'potential', 'sup_potential',
           'asymptotic_quadratic_bound', 'asymptotic_linear_bound']

logger = logging.getLogger(__name__)

#: Slack granted to a declared asymptotic bound
DECLARATION_SLACK = 1e-9

#: Number of samples per side of the asymptotic probe
PROBE_SAMPLES = 64


class AsymptoticBound(NamedTuple):
    """Declared growth at infinity, claimed beyond |t| >= radius.

    *c* bounds limsup G(t)/t^2 and *linear* bounds limsup g(t)/t; either may
    be left undeclared.
    """
    c: Optional[float]
    radius: float = 1.0
    linear: Optional[float] = None


def _tail_limit(poly, power, direction):
    """lim poly(x) / x**power as x -> direction * inf"""
    coef = np.trim_zeros(np.asarray(poly.coef, dtype=float), 'b')
    degree = len(coef) - 1
    if degree < power:
        return 0.0
    if degree == power:
        return float(coef[-1])
    sign = np.sign(coef[-1]) * (direction ** (degree - power))
    return math.copysign(math.inf, sign)


@dataclass(frozen=True, eq=False)
class PiecewiseNonlinearity(JsonMixin):
    """g: R -> R given by ``len(breakpoints) + 1`` polynomial segments, one per
    open interval between consecutive breakpoints. ``segments[i]`` lists the
    coefficients of segment *i* in increasing degree.
    """
    breakpoints: Tuple[float, ...] = ()
    segments: Tuple[Tuple[float, ...], ...] = ((0.0,),)
    asymptotic: Optional[AsymptoticBound] = field(default=None)

    def __post_init__(self):
        breakpoints = tuple(float(t) for t in self.breakpoints)
        segments = tuple(tuple(float(c) for c in seg) for seg in self.segments)
        if not all(math.isfinite(t) for t in breakpoints):
            raise InvalidNonlinearity('breakpoints must be finite')
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise InvalidNonlinearity('breakpoints must be strictly increasing')
        if len(segments) != len(breakpoints) + 1:
            raise InvalidNonlinearity(
                f'{len(breakpoints)} breakpoints need {len(breakpoints) + 1} segments, '
                f'got {len(segments)}')
        if any(not seg or not all(math.isfinite(c) for c in seg) for seg in segments):
            raise InvalidNonlinearity('segments need finite coefficients')
        asymptotic = self.asymptotic
        if asymptotic is not None:
            asymptotic = AsymptoticBound(*asymptotic)
            if not asymptotic.radius > 0:
                raise InvalidNonlinearity('asymptotic radius must be positive')
        object.__setattr__(self, 'breakpoints', breakpoints)
        object.__setattr__(self, 'segments', segments)
        object.__setattr__(self, 'asymptotic', asymptotic)

    def __repr__(self):
        return f'<PiecewiseNonlinearity>: {len(self.segments)} segments'

    @cached_property
    def _polys(self):
        return tuple(Polynomial(seg) for seg in self.segments)

    @cached_property
    def _bp(self):
        return np.array(self.breakpoints, dtype=float)

    @cached_property
    def _antiderivatives(self):
        return tuple(p.integ() for p in self._polys)

    @cached_property
    def _potential_at_breakpoints(self):
        """G at every breakpoint, accumulated outwards from 0"""
        bp, P = self.breakpoints, self._antiderivatives
        values = [0.0] * len(bp)
        for j, t in enumerate(bp):
            if t > 0:
                prev = max(0.0, bp[j - 1]) if j > 0 else 0.0
                base = values[j - 1] if j > 0 and bp[j - 1] > 0 else 0.0
                values[j] = base + float(P[j](t) - P[j](prev))
        for j in reversed(range(len(bp))):
            t = bp[j]
            if t < 0:
                nxt = min(0.0, bp[j + 1]) if j + 1 < len(bp) else 0.0
                base = values[j + 1] if j + 1 < len(bp) and bp[j + 1] < 0 else 0.0
                values[j] = base - float(P[j + 1](nxt) - P[j + 1](t))
        return tuple(values)

    @cached_property
    def _anchors(self):
        """Per segment: a point of its closure where G is known, and G there"""
        bp, G = self.breakpoints, self._potential_at_breakpoints
        anchors = []
        for i in range(len(self.segments)):
            lo = bp[i - 1] if i > 0 else -math.inf
            hi = bp[i] if i < len(bp) else math.inf
            if lo <= 0 <= hi:
                anchors.append((0.0, 0.0))
            elif hi < 0:
                anchors.append((hi, G[i]))
            else:
                anchors.append((lo, G[i - 1]))
        return tuple(anchors)

    def segment_index(self, t, side='right'):
        """Index of the segment owning *t*; at a breakpoint *side* picks the
        segment to its right (default) or left
        """
        return int(np.searchsorted(self._bp, t, side=side))

    def segment_bounds(self, i):
        lo = self.breakpoints[i - 1] if i > 0 else -math.inf
        hi = self.breakpoints[i] if i < len(self.breakpoints) else math.inf
        return lo, hi

    def segment(self, i):
        return self._polys[i]

    def eval(self, t):
        """Value of the owning segment; right segment at a breakpoint"""
        return float(self._polys[self.segment_index(t)](t))

    def eval_many(self, ts):
        return self._piecewise(np.asarray(ts, dtype=float), self._polys, 'right')

    def _piecewise(self, ts, polys, side):
        idx = np.searchsorted(self._bp, ts, side=side)
        out = np.empty_like(ts)
        for i, poly in enumerate(polys):
            mask = idx == i
            if np.any(mask):
                out[mask] = poly(ts[mask])
        return out

    def one_sided_limits(self, t):
        """(left limit, right limit) of g at *t*"""
        left = float(self._polys[self.segment_index(t, 'left')](t))
        right = float(self._polys[self.segment_index(t, 'right')](t))
        return left, right

    def envelope_minus(self, t):
        return min(self.one_sided_limits(t))

    def envelope_plus(self, t):
        return max(self.one_sided_limits(t))

    def envelopes_many(self, ts):
        """Vectorized (g-, g+) over an array of points"""
        ts = np.asarray(ts, dtype=float)
        left = self._piecewise(ts, self._polys, 'left')
        right = self._piecewise(ts, self._polys, 'right')
        return np.minimum(left, right), np.maximum(left, right)

    def derivative_many(self, ts):
        """Derivative of the owning segment (right segment at breakpoints)"""
        return self._piecewise(np.asarray(ts, dtype=float),
                               tuple(p.deriv() for p in self._polys), 'right')

    def potential(self, t):
        """G(t) = int_0^t g, exact"""
        i = self.segment_index(t)
        anchor, value = self._anchors[i]
        P = self._antiderivatives[i]
        return value + float(P(t) - P(anchor))

    def potential_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        idx = np.searchsorted(self._bp, ts, side='right')
        out = np.empty_like(ts)
        for i, P in enumerate(self._antiderivatives):
            mask = idx == i
            if np.any(mask):
                anchor, value = self._anchors[i]
                out[mask] = value + P(ts[mask]) - P(anchor)
        return out

    def sup_potential(self, gamma):
        """max of G over [-gamma, gamma]: G is checked at the ends, at 0, at the
        breakpoints in range and at the roots of every segment (the
        stationary points of G)
        """
        if not gamma > 0:
            raise ValidationError(f'gamma must be positive, got {gamma}')
        candidates = [-gamma, 0.0, gamma]
        candidates += [t for t in self.breakpoints if -gamma <= t <= gamma]
        for i, poly in enumerate(self._polys):
            lo, hi = self.segment_bounds(i)
            lo, hi = max(lo, -gamma), min(hi, gamma)
            if lo < hi:
                candidates.extend(real_roots_in(poly, lo, hi).tolist())
        return float(np.max(self.potential_many(candidates)))

    def lipschitz_bound(self, radius):
        """Largest |g'| over the segments restricted to [-radius, radius]"""
        bound = 0.0
        for i, poly in enumerate(self._polys):
            lo, hi = self.segment_bounds(i)
            lo, hi = max(lo, -radius), min(hi, radius)
            if lo >= hi:
                continue
            slope = poly.deriv()
            points = [lo, hi] + real_roots_in(slope.deriv(), lo, hi).tolist()
            bound = max(bound, float(np.max(np.abs(slope(np.array(points))))))
        return bound

    def is_positive_on(self, lo, hi):
        """True when g > 0 on ]lo, hi[ minus its breakpoints"""
        cuts = [lo] + [t for t in self.breakpoints if lo < t < hi] + [hi]
        for a, b in zip(cuts, cuts[1:]):
            poly = self._polys[self.segment_index(0.5 * (a + b))]
            if real_roots_in(poly, a, b).size or not poly(0.5 * (a + b)) > 0:
                return False
        return True

    def tail_potential_limit(self):
        """Exact limsup of G(t)/t^2 as |t| -> inf, from the outer segments"""
        limits = []
        for i, direction in ((0, -1), (len(self.segments) - 1, 1)):
            anchor, value = self._anchors[i]
            P = self._antiderivatives[i]
            Q = P + (value - P(anchor))
            limits.append(_tail_limit(Q, 2, direction))
        return max(limits)

    def tail_growth_limit(self):
        """Exact limsup of g(t)/t as |t| -> inf, from the outer segments"""
        return max(_tail_limit(self._polys[0], 1, -1),
                   _tail_limit(self._polys[-1], 1, 1))

    def scaled(self, factor):
        """c * g for c > 0, declarations scaled along"""
        if not factor > 0:
            raise ValidationError(f'scale factor must be positive, got {factor}')
        asymptotic = self.asymptotic
        if asymptotic is not None:
            asymptotic = AsymptoticBound(
                None if asymptotic.c is None else factor * asymptotic.c,
                asymptotic.radius,
                None if asymptotic.linear is None else factor * asymptotic.linear)
        return PiecewiseNonlinearity(
            self.breakpoints,
            tuple(tuple(factor * c for c in seg) for seg in self.segments),
            asymptotic)

    def to_json(self):
        data = {'breakpoints': list(self.breakpoints),
                'segments': [list(seg) for seg in self.segments]}
        if self.asymptotic is not None:
            data['asymptotic'] = {'c': self.asymptotic.c, 'R': self.asymptotic.radius}
            if self.asymptotic.linear is not None:
                data['asymptotic']['linear'] = self.asymptotic.linear
        return data

    @classmethod
    def from_json(cls, data):
        """Build from ``{breakpoints, segments, asymptotic: {c, R, linear}}``"""
        try:
            asymptotic = data.get('asymptotic')
            if asymptotic is not None:
                asymptotic = AsymptoticBound(asymptotic.get('c'),
                                             asymptotic.get('R', 1.0),
                                             asymptotic.get('linear'))
            return cls(tuple(data.get('breakpoints', ())),
                       tuple(data['segments']), asymptotic)
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise InvalidNonlinearity(f'cannot read nonlinearity: {e!r}')


@dataclass(frozen=True)
class WeightVector(JsonMixin):
    """Nonnegative, not identically zero weights alpha_k"""
    alpha: Tuple[float, ...]

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        if not alpha or any(not a >= 0 for a in alpha) or not sum(alpha) > 0:
            raise ValidationError('weights must be nonnegative and not all zero')
        object.__setattr__(self, 'alpha', alpha)

    @classmethod
    def ones(cls, order):
        return cls((1.0,) * order)

    @property
    def total(self):
        return math.fsum(self.alpha)

    def __len__(self):
        return len(self.alpha)

    def as_array(self):
        return np.array(self.alpha)


def constant(value, asymptotic=None):
    """g(t) = value"""
    return PiecewiseNonlinearity((), ((value,),), asymptotic)


def linear(slope, asymptotic=None):
    """g(t) = slope * t"""
    return PiecewiseNonlinearity((), ((0.0, slope),), asymptotic)


def truncated_power(power, radius=1.0, coefficient=1.0, asymptotic=None):
    """coefficient * t**power on ]-radius, radius[, zero outside"""
    inner = (0.0,) * power + (coefficient,)
    return PiecewiseNonlinearity((-radius, radius), ((0.0,), inner, (0.0,)), asymptotic)


def step(at=0.0, low=0.0, high=1.0, asymptotic=None):
    """*low* left of *at*, *high* right of it"""
    return PiecewiseNonlinearity((at,), ((low,), (high,)), asymptotic)


def eval(g, t):
    return g.eval(t)


def envelope_minus(g, t):
    return g.envelope_minus(t)


def envelope_plus(g, t):
    return g.envelope_plus(t)


def potential(g, t):
    return g.potential(t)


def sup_potential(g, gamma):
    return g.sup_potential(gamma)


def _probe(g, quotient, declared, exact, what):
    radius = g.asymptotic.radius
    xs = log_grid(radius, 100.0 * radius, PROBE_SAMPLES)
    xs = np.concatenate([-xs[::-1], xs])
    samples = quotient(xs)
    worst = float(np.max(samples))
    logger.debug('%s probe: declared %g, exact limsup %g, largest sample %g',
                 what, declared, exact, worst)
    if exact > declared + DECLARATION_SLACK:
        raise InconsistentDeclaration(
            f'{what}: limsup {exact:g} exceeds declared {declared:g}', sample=worst)
    return declared


def asymptotic_quadratic_bound(g):
    """The declared bound c on limsup G(t)/t^2 at infinity, once checked
    against the growth of the outer segments

    :raises UndeclaredAsymptotics: if *g* declares no such bound
    :raises InconsistentDeclaration: if the actual limsup exceeds it
    """
    if g.asymptotic is None or g.asymptotic.c is None:
        raise UndeclaredAsymptotics('no bound on G(t)/t^2')
    return _probe(g, lambda xs: g.potential_many(xs) / xs ** 2,
                  g.asymptotic.c, g.tail_potential_limit(), 'G(t)/t^2')


def asymptotic_linear_bound(g):
    """The declared bound on limsup g(t)/t at infinity, checked like
    :func:`asymptotic_quadratic_bound`
    """
    if g.asymptotic is None or g.asymptotic.linear is None:
        raise UndeclaredAsymptotics('no bound on g(t)/t')
    return _probe(g, lambda xs: g.eval_many(xs) / xs,
                  g.asymptotic.linear, g.tail_growth_limit(), 'g(t)/t')
