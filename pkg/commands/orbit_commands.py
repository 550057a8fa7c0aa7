"""
Orbit Commands - Trajectories, periodic sets, normal forms and block decompositions
"""

import re

from combinatorial_models import partition_of, render_partition
from commands.common import EXIT_OK, UsageError
from normal_forms import block_decompose, dual_braid_lift
from pop_dynamics import conjugation_orbit_set, forward_orbit, is_single_cycle
from utils.element_parser import parse_element
from utils.errors import BudgetExceededError

_SET = re.compile(r"^O_?(\d+)$", re.IGNORECASE)


def _context(runner, session, args):
    cox_type, rank = runner.group_of(args)
    ctx = session.context(cox_type, rank)
    if ctx.large and not session.config.allow_large:
        raise BudgetExceededError(f"{ctx.label} needs --allow-large (its NC lattice has {ctx.catalan_number} elements)")
    return ctx


def _element(ctx, args):
    if args.element is None:
        raise UsageError("An element is required, e.g. \"(135642)\", \"c^-1\" or \"w:s1 s2\"")
    return parse_element(ctx, args.element)


def _orbit_payload(ctx, orbit) -> dict:
    return {
        "group": ctx.label,
        "start": ctx.format(orbit.start),
        "trajectory": [ctx.format(w) for w in orbit.trajectory],
        "projections": [ctx.format(p) for p in orbit.projections],
        "size": orbit.size,
        "transient_length": orbit.transient_length,
        "cycle_length": orbit.cycle_length,
        "terminal": orbit.terminal.value,
    }


def cmd_orbit(runner, session, args) -> int:
    config = session.config
    ctx = _context(runner, session, args)
    op = session.operator(ctx)
    export = runner.export_manager

    if args.in_set:
        match = _SET.match(args.in_set.strip())
        if not match:
            raise UsageError(f"--in expects O<k>, e.g. O5, got {args.in_set!r}")
        k = int(match.group(1))
        members = conjugation_orbit_set(ctx, k, budget=config.max_group_order)
        if not members:
            header = {"group": ctx.label, "set": f"O{k}", "size": 0}
            text = f"{ctx.label} O{k}: empty (c is not conjugate to c^{k})\n"
            runner.emit(export.render_json(header) if config.output_format == "json" else text, config)
            return EXIT_OK
        single = is_single_cycle(op, members)
        orbit = forward_orbit(ctx, op.lattice, members[0], op)
        if config.output_format == "json":
            payload = {"set": f"O{k}", "set_size": len(members), "single_cycle": single}
            payload.update(_orbit_payload(ctx, orbit))
            runner.emit(export.render_json(payload), config)
        else:
            shape = "a single Pop_T cycle" if single else "not a single Pop_T cycle"
            text = f"{ctx.label} O{k}: {len(members)} elements, {shape}; cycle_length {orbit.cycle_length}\n"
            runner.emit(text + export.render_orbit_text(orbit, ctx.format), config)
        return EXIT_OK

    orbit = forward_orbit(ctx, op.lattice, _element(ctx, args), op)
    if config.output_format == "json":
        runner.emit(export.render_json(_orbit_payload(ctx, orbit)), config)
    else:
        runner.emit(f"{ctx.label} orbit of {ctx.format(orbit.start)}\n" + export.render_orbit_text(orbit, ctx.format),
                    config)
    return EXIT_OK


def cmd_normal_form(runner, session, args) -> int:
    """w = pi_T(w_k) ... pi_T(w_1)"""
    config = session.config
    ctx = _context(runner, session, args)
    op = session.operator(ctx)
    w = _element(ctx, args)
    lift = dual_braid_lift(ctx, op.lattice, w, op)
    if config.output_format == "json":
        runner.emit(runner.export_manager.render_json(lift.to_dict(ctx)), config)
    else:
        runner.emit(f"{ctx.format(w)} = {lift.format(ctx)}\n", config)
    return EXIT_OK


def cmd_blocks(runner, session, args) -> int:
    config = session.config
    ctx = _context(runner, session, args)
    lattice = session.lattice(ctx)
    w = _element(ctx, args)
    decomposition = block_decompose(ctx, lattice, w)
    if config.output_format == "json":
        runner.emit(runner.export_manager.render_json(decomposition.to_dict(ctx)), config)
        return EXIT_OK
    lines = [f"{ctx.format(w)}: pi_T = {ctx.format(lattice.element(decomposition.projection_index))}"]
    for cox, factor, flag in zip(decomposition.block_coxeter, decomposition.factors, decomposition.sif_flags):
        lines.append(f"  block c = {ctx.format(cox)}  factor {ctx.format(factor)}  {'SIF' if flag else 'not SIF'}")
    runner.emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_partition(runner, session, args) -> int:
    """Circular partition of w and of pi_T(w)"""
    config = session.config
    ctx = _context(runner, session, args)
    if ctx.backend.kind not in ("perm", "signed"):
        raise UsageError(f"{ctx.label} has no circular partition model; use type A, B or D")
    op = session.operator(ctx)
    w = _element(ctx, args)
    projection = op.projection(w)
    text = (
        f"w = {ctx.format(w)}\n{render_partition(partition_of(ctx, w))}\n"
        f"pi_T(w) = {ctx.format(projection)}\n{render_partition(partition_of(ctx, projection))}\n"
    )
    runner.emit(text, config)
    return EXIT_OK


def setup(runner):
    """Register the orbit commands"""
    orbit = runner.add_command("orbit", cmd_orbit, "Forward Pop_T orbit of an element or of a set O_k")
    orbit.add_argument("element", nargs="?", help='Element, e.g. "(135642)", "c^-1", "w:s1 s3", "r:2 123456"')
    orbit.add_argument("--in", dest="in_set", default=None, help="Start in O_k = {w : w^-1 c w = c^k}, e.g. O5")

    nf = runner.add_command("normal-form", cmd_normal_form, "Dual braid lift read off the Pop_T trajectory")
    nf.add_argument("element", nargs="?")

    blocks = runner.add_command("blocks", cmd_blocks, "SIF factors over the blocks of pi_T(w)")
    blocks.add_argument("element", nargs="?")

    partition = runner.add_command("partition", cmd_partition, "Circular partition diagrams of w and pi_T(w)")
    partition.add_argument("element", nargs="?")
