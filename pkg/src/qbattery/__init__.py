"""Ergotropy of one- and two-qubit quantum batteries under charging and noise."""

from .channels import NoiseKind, NoiseParams
from .ergotropy import ergotropy_spectral
from .models import SingleQubitParams, XYZDMParams, critical_dmi

__all__ = ["NoiseKind", "NoiseParams", "SingleQubitParams", "XYZDMParams", "critical_dmi", "ergotropy_spectral"]
