"""helifront: helicoidal surfaces generated by singular plane curves.

Curvature invariants of framed surfaces, frontal/front classification,
parallel and focal surfaces, deformation tracking of profile-curve
singularities, and boundedness analysis of Gaussian/mean curvature near
singular points.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
