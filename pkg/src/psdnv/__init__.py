"""Photonic spin density probed by an NV-center spin qubit."""
