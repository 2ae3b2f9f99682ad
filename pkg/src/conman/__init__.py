"""conman: a honeypot toolkit for measuring wallet-recovery support scams.

Bait generation, a deterministic simulated platform, interaction filtering,
contact-channel extraction, campaign and embedding clustering, payment
extraction with checksum validation, honey-wallet theft detection, and
reproducible report emission.
"""

__version__ = "0.1.0"
