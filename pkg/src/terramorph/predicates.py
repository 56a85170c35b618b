"""Robust 2D geometric predicates.

Float evaluation with a conservative forward-error filter; when the filter
cannot certify the sign, the determinant is recomputed exactly in rational
arithmetic. The exact path is slow but only triggers near degeneracy
(collinear or cocircular points), which is exactly where it is needed.
"""

from fractions import Fraction

# Machine epsilon for IEEE double, halved (Shewchuk's convention).
_EPS = 2.0 ** -53
# Stage-A error bounds from Shewchuk's "Adaptive Precision Floating-Point
# Arithmetic and Fast Robust Geometric Predicates".
_CCW_ERR_A = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERR_A = (10.0 + 96.0 * _EPS) * _EPS


def orient2d_det(ax, ay, bx, by, cx, cy):
    """Signed doubled area of triangle abc, plus a reliability flag.

    Returns (det, certain). ``det > 0`` means c lies left of the directed
    line a->b. When ``certain`` is False the sign of ``det`` may be wrong
    and the caller must fall back to :func:`orient2d`.
    """
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    return det, abs(det) > _CCW_ERR_A * detsum


def orient2d(ax, ay, bx, by, cx, cy):
    """Exact sign of the orientation of c relative to the line a->b.

    1: counter-clockwise (c left of a->b), -1: clockwise, 0: collinear.
    """
    det, certain = orient2d_det(ax, ay, bx, by, cx, cy)
    if certain:
        return 1 if det > 0.0 else -1
    # Exact rational evaluation; Fraction(float) is lossless.
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def incircle(ax, ay, bx, by, cx, cy, dx, dy):
    """Exact sign of the incircle test for d against the circumcircle of abc.

    The triangle abc must be counter-clockwise. 1: d strictly inside the
    circumcircle, -1: strictly outside, 0: cocircular.
    """
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady

    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy

    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))

    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > _ICC_ERR_A * permanent:
        return 1 if det > 0.0 else -1

    fax, fay, fbx, fby = map(Fraction, (ax, ay, bx, by))
    fcx, fcy, fdx, fdy = map(Fraction, (cx, cy, dx, dy))
    adx = fax - fdx
    ady = fay - fdy
    bdx = fbx - fdx
    bdy = fby - fdy
    cdx = fcx - fdx
    cdy = fcy - fdy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def orient2d_filter_arrays(ax, ay, bx, by, cx, cy):
    """Vectorized stage-A orientation filter for numpy array inputs.

    Returns (det, uncertain) arrays; wherever ``uncertain`` is True the
    sign of ``det`` is not trustworthy and a scalar exact test is needed.
    Inputs broadcast like numpy operands.
    """
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    return det, abs(det) <= _CCW_ERR_A * detsum
