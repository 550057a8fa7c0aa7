"""
Session - Contexts, lattices and group scans shared across one run
Everything is memoized per (group, Coxeter word, convention)
"""

import sys
from typing import Dict, Optional, Tuple

from group_engine import CoxeterSpec, GroupContext, ProductConvention, build_group
from nc_lattice import NCLattice, build_nc
from pop_dynamics import GroupScan, PopOperator, scan_group
from utils.lattice_store import LatticeStore, entry_key
from utils.run_config import RunConfig


class Session:
    """Builds and caches the objects every command needs"""

    def __init__(self, config: RunConfig):
        self.config = config
        self._contexts: Dict[Tuple, GroupContext] = {}
        self._lattices: Dict[str, NCLattice] = {}
        self._scans: Dict[str, GroupScan] = {}
        self._store: Optional[LatticeStore] = None

    @property
    def store(self) -> Optional[LatticeStore]:
        if not self.config.cache_enabled:
            return None
        if self._store is None:
            try:
                self._store = LatticeStore(self.config.cache_dir)
            except OSError as e:
                print(f"[WARNING] Lattice cache disabled: {e}", file=sys.stderr)
                self.config.cache_enabled = False
                return None
        return self._store

    def context(
        self,
        cox_type,
        rank: int,
        coxeter: Optional[CoxeterSpec] = None,
        convention: Optional[ProductConvention] = None,
        backend: str = "auto",
    ) -> GroupContext:
        coxeter = coxeter or self.config.coxeter_spec
        convention = convention or self.config.convention
        key = (str(cox_type).upper(), rank, coxeter, convention, backend)
        if key not in self._contexts:
            self._contexts[key] = build_group(cox_type, rank, convention, coxeter, backend)
        return self._contexts[key]

    def lattice(self, ctx: GroupContext) -> NCLattice:
        key = entry_key(ctx)
        if key not in self._lattices:
            self._lattices[key] = build_nc(
                ctx,
                store=self.store,
                debug=self.config.debug_checks,
                budget=self.config.max_nc_size,
                cache_size=self.config.projection_cache_max_size,
            )
        return self._lattices[key]

    def operator(self, ctx: GroupContext) -> PopOperator:
        return PopOperator(ctx, self.lattice(ctx), self.config.projection_mode)

    def scan(self, ctx: GroupContext) -> GroupScan:
        """Whole-group Pop_T scan under the configured budget"""
        key = entry_key(ctx)
        if key not in self._scans:
            self._scans[key] = scan_group(
                ctx,
                self.lattice(ctx),
                budget=self.config.max_group_order,
                jobs=self.config.jobs,
                allow_large=self.config.allow_large,
                mode=self.config.projection_mode,
            )
            if self.config.debug_checks:
                stats = self.lattice(ctx).join_cache.get_stats()
                print(f"[INFO] {ctx.label} join cache: {stats['joins']} joins, "
                      f"{stats['lookups']} lookups, hit ratio {stats['hit_ratio']:.2f}, "
                      f"{stats['evictions']} evictions", file=sys.stderr)
        return self._scans[key]

    def within_budget(self, ctx: GroupContext) -> bool:
        if ctx.large and not self.config.allow_large:
            return False
        return self.config.allow_large or ctx.group_order <= self.config.max_group_order
