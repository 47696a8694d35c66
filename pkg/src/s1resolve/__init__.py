"""Equivariant resolution atlases for discrete singular fibers of circle actions."""
