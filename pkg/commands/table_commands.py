"""
Table Commands - Depth tables, the Pop_T forest and SIF counts
"""

from commands.common import EXIT_MISMATCH, EXIT_OK, UsageError, group_key, log_status
from normal_forms import projection_histogram, sif_count
from pop_dynamics import table_from_scan
from utils.golden_tables import PARTIAL_DEPTH_TABLES, compare_depth_row, expected_depth_table, expected_sif_count


def verify_table(table, ctx) -> int:
    """Compare a computed depth table against the reference row"""
    key = group_key(ctx)
    verdict = compare_depth_row(*key, table.row(), table.periodic_count)
    if verdict is None:
        log_status("WARNING", f"No reference depth table for {ctx.label}")
        return EXIT_OK
    if verdict:
        log_status("PASS", f"{ctx.label} depth table {list(table.row())} (periodic {table.periodic_count}) matches")
        return EXIT_OK
    expected = expected_depth_table(*key)
    reference = f"{list(expected[0])} (periodic {expected[1]})" if expected else f"entries {PARTIAL_DEPTH_TABLES[key]}"
    log_status("FAIL", f"{ctx.label} depth table {list(table.row())} (periodic {table.periodic_count}), "
                       f"expected {reference}")
    return EXIT_MISMATCH


def cmd_table(runner, session, args) -> int:
    cox_type, rank = runner.group_of(args)
    config = session.config
    if config.output_format == "dot":
        raise UsageError("Depth tables render as json, tsv or text; use `tree` for DOT")
    ctx = session.context(cox_type, rank)
    table = table_from_scan(session.scan(ctx))
    text = runner.export_manager.render_table(table, config.output_format)
    runner.emit(text, config)
    if args.pdf:
        path = runner.export_manager.export_to_pdf(
            [{"heading": f"Depth table of {ctx.label}", "body": runner.export_manager.render_table_text(table)}],
            title=f"Pop_T on {ctx.label}",
        )
        if path:
            log_status("OK", f"PDF written to {path}")
        else:
            log_status("WARNING", "reportlab not installed; PDF skipped")
    if args.verify:
        return verify_table(table, ctx)
    return EXIT_OK


def cmd_tree(runner, session, args) -> int:
    """w -> Pop_T(w) for every element, as a DOT forest rooted at e"""
    cox_type, rank = runner.group_of(args)
    ctx = session.context(cox_type, rank)
    scan = session.scan(ctx)
    fmt = ctx.format
    edges = [(fmt(w), fmt(scan.elements[j])) for w, j in zip(scan.elements, scan.pop_index.tolist())]
    runner.emit(runner.export_manager.render_forest_dot(f"Pop_T {ctx.label}", edges, root=fmt(ctx.identity)),
                session.config)
    return EXIT_OK


def cmd_sif(runner, session, args) -> int:
    cox_type, rank = runner.group_of(args)
    config = session.config
    ctx = session.context(cox_type, rank)
    scan = session.scan(ctx)
    count = sif_count(ctx, scan.lattice, scan=scan)
    if config.output_format == "json":
        histogram = projection_histogram(scan)
        payload = {
            "group": ctx.label,
            "sif": count,
            "projection_histogram": {ctx.format(scan.lattice.element(i)): histogram[i] for i in sorted(histogram)},
        }
        runner.emit(runner.export_manager.render_json(payload), config)
    else:
        runner.emit(f"{ctx.label}\tSIF\t{count}\n", config)
    if args.verify:
        expected = expected_sif_count(*group_key(ctx))
        if expected is None:
            log_status("WARNING", f"No reference SIF count for {ctx.label}")
        elif expected != count:
            log_status("FAIL", f"{ctx.label}: {count} SIF elements, expected {expected}")
            return EXIT_MISMATCH
        else:
            log_status("PASS", f"{ctx.label}: {count} SIF elements")
    return EXIT_OK


def setup(runner):
    """Register the table commands"""
    table = runner.add_command("table", cmd_table, "Depth table of Pop_T over the whole group")
    table.add_argument("--verify", action="store_true", help="Compare against the reference row")
    table.add_argument("--pdf", action="store_true", help="Also write a PDF summary")

    runner.add_command("tree", cmd_tree, "Pop_T forest as DOT (edges w -> Pop_T(w))")

    sif = runner.add_command("sif", cmd_sif, "Number of elements with pi_T(w) = c")
    sif.add_argument("--verify", action="store_true", help="Compare against the reference count")
