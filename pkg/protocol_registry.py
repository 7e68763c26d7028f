from dataclasses import dataclass
from typing import Dict, List, Optional

from key_rate import ProofVariant


@dataclass(frozen=True)
class ProtocolInfo:
    name: str
    title: str
    channels: int           # attacked quantum channels
    entangled: bool
    proofs: tuple           # ProofVariant values reported for this protocol


@dataclass(frozen=True)
class ProofInfo:
    variant: ProofVariant
    leakage: str            # χ as a function of p_e
    condition: str          # extra security condition, '' if none


class ProtocolRegistry:
    """Registry of the protocols the attack analysis covers and the proofs reported for each"""

    PROTOCOLS: Dict[str, ProtocolInfo] = {
        'bb84': ProtocolInfo('bb84', 'BB84 prepare-and-measure', 1, False,
                             (ProofVariant.PURIFICATION, ProofVariant.COLLECTIVE)),
        'mdi': ProtocolInfo('mdi', 'Measurement-device-independent', 2, False,
                            (ProofVariant.PURIFICATION, ProofVariant.COLLECTIVE)),
        'di': ProtocolInfo('di', 'Entanglement-based, CHSH tested', 2, True,
                           (ProofVariant.PURIFICATION, ProofVariant.COLLECTIVE, ProofVariant.CHSH)),
    }

    PROOFS: Dict[ProofVariant, ProofInfo] = {
        ProofVariant.PURIFICATION: ProofInfo(ProofVariant.PURIFICATION, 'H(p_e)', ''),
        ProofVariant.COLLECTIVE: ProofInfo(ProofVariant.COLLECTIVE, '2p_e', ''),
        ProofVariant.CHSH: ProofInfo(ProofVariant.CHSH, '2p_e', 'S > 2'),
    }

    @classmethod
    def get_protocol(cls, name: str) -> Optional[ProtocolInfo]:
        """Get protocol by name"""
        return cls.PROTOCOLS.get(name.lower())

    @classmethod
    def get_proof(cls, name: str) -> Optional[ProofInfo]:
        """Get proof info by variant name ('purification', 'collective', 'chsh')"""
        try:
            return cls.PROOFS[ProofVariant(name.lower())]
        except ValueError:
            return None

    @classmethod
    def get_protocol_names(cls) -> List[str]:
        return list(cls.PROTOCOLS.keys())

    @classmethod
    def get_proof_names(cls) -> List[str]:
        return [v.value for v in cls.PROOFS]

    @classmethod
    def get_proofs_for(cls, protocol: str) -> List[ProofVariant]:
        """Proof variants reported for a protocol (empty for unknown names)"""
        info = cls.get_protocol(protocol)
        return list(info.proofs) if info else []
