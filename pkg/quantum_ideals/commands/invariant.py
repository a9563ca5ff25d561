"""
`invariant` command: I_p or tau_3 of a closed manifold given by framed surgery
"""
import logging

from ..config.settings import ConfigError, RunConfig
from ..services.quantum_invariant import (
    SurgeryPresentation,
    h_divisibility_holds,
    homology_closed,
    invariant_Ip,
    invariant_tau3,
    invariant_tv3,
    signature_data,
)
from .common import EXIT_CHECK_FAILED, EXIT_OK, CommandResult, load_diagram, with_metadata

logger = logging.getLogger(__name__)


def presentation_for(cfg: RunConfig) -> SurgeryPresentation:
    if cfg.unknot_framing is not None:
        return SurgeryPresentation.framed_unknot(cfg.unknot_framing)
    diagram = load_diagram(cfg)
    framings = cfg.framings if cfg.framings is not None else [0] * diagram.num_components
    if len(framings) != diagram.num_components:
        raise ConfigError(
            f"--framings has {len(framings)} entries for a {diagram.num_components}-component link"
        )
    return SurgeryPresentation(diagram, tuple(framings))


def cmd_invariant(cfg: RunConfig) -> CommandResult:
    """Value, conductor, nu_h, norm and unit flag of the surgered manifold"""
    pres = presentation_for(cfg)
    matrix = pres.linking_matrix()
    free_rank, torsion = homology_closed(matrix)
    b_plus, b_minus, nullity = signature_data(matrix)
    logger.info(f"Presentation {pres.fingerprint()}: {pres.diagram!r}, framings {pres.framings}")

    status = EXIT_OK
    if cfg.theory == 'SU2':
        value = invariant_tau3(pres, cfg.frontier_cap)
        payload = value.to_dict()
        payload['tv3'] = invariant_tv3(pres, cfg.frontier_cap).to_text()
    else:
        value = invariant_Ip(pres, cfg.p, cfg.frontier_cap)
        payload = value.to_dict()
        payload['h_divisibility'] = h_divisibility_holds(pres, value)
        if not payload['h_divisibility']:
            logger.error(f"nu_h(I_{cfg.p}) below d-1 although H_1(M; Z_{cfg.p}) is nonzero")
            status = EXIT_CHECK_FAILED

    payload.update({
        'framings': list(pres.framings),
        'linking_matrix': [list(r) for r in matrix.rows],
        'signature': {'b_plus': b_plus, 'b_minus': b_minus, 'nullity': nullity},
        'h1': {'free_rank': free_rank, 'torsion': torsion},
    })
    return with_metadata(payload, cfg), status
