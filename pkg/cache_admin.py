"""
Lattice Cache Admin
Lists, verifies and purges cached NC lattices

Usage:
python cache_admin.py list
python cache_admin.py verify
python cache_admin.py purge [ENTRY_KEY]
"""

import os
import sys

from dotenv import load_dotenv

from utils.lattice_store import LatticeStore


def _store() -> LatticeStore:
    return LatticeStore(os.getenv("POPTSACK_CACHE_DIR", ".poptsack_cache"))


def list_entries(store: LatticeStore) -> int:
    """Print one line per cached lattice"""
    entries = store.list_entries()
    if not entries:
        print("[INFO] Lattice cache is empty")
        return 0
    print("=" * 70)
    print(f"Lattice cache: {store.db_path}")
    print("=" * 70)
    for entry in entries:
        print(f"{entry['entry_key']:<40} {entry['n_elements']:>7} elements  {entry['created_at']}")
    file_size_mb = os.path.getsize(store.db_path) / (1024 * 1024)
    print(f"\nEntries: {len(entries)}   File Size: {file_size_mb:.2f} MB")
    return 0


def verify_entries(store: LatticeStore) -> int:
    """Decode every entry and check its checksum"""
    bad = 0
    for entry in store.list_entries():
        reason = store.verify_entry(entry["entry_key"])
        if reason is None:
            print(f"[OK] {entry['entry_key']}")
        else:
            bad += 1
            print(f"[ERROR] {entry['entry_key']}: {reason}")
    if bad:
        print(f"[WARNING] {bad} corrupt entr{'y' if bad == 1 else 'ies'}; run `purge` and rebuild")
    return 1 if bad else 0


def purge_entries(store: LatticeStore, key=None) -> int:
    removed = store.purge(key)
    print(f"[OK] Removed {removed} entr{'y' if removed == 1 else 'ies'}")
    return 0


def main(argv) -> int:
    load_dotenv()
    if not argv:
        command = "list"
    else:
        command = argv[0].lower()
    try:
        store = _store()
        if command == "list":
            return list_entries(store)
        if command == "verify":
            return verify_entries(store)
        if command == "purge":
            return purge_entries(store, argv[1] if len(argv) > 1 else None)
    except Exception as e:
        print(f"[ERROR] Cache maintenance failed: {e}")
        import traceback
        traceback.print_exc()
        return 2

    print(f"[ERROR] Unknown command: {command}")
    print("\nUsage:")
    print("  python cache_admin.py list             # Show cached lattices")
    print("  python cache_admin.py verify           # Check headers and checksums")
    print("  python cache_admin.py purge [KEY]      # Remove one entry or everything")
    return 2


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
