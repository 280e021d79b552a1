"""Regenerate the mode-algebra definition files from the Python builders."""
from __future__ import annotations

from ravioli import algebras
from ravioli.algfile import AlgebraDefinition, data_path, dump, mode_algebra_entry

FILES = {
    "svir_n1": ("N=1 superconformal algebra, hand table", [algebras.svir_n1]),
    "svir_n2": ("N=2 superconformal algebra: hand table and generating-field OPEs",
                [algebras.svir_n2, algebras.svir_n2_fields]),
    "svir_n3": ("N=3 superconformal algebra as generating-field OPEs", [algebras.svir_n3]),
    "svir_n4_p0": ("big N=4 superconformal algebra at p = 0", [lambda: algebras.svir_n4(0)]),
    "evir": ("exceptional superconformal algebra", [algebras.evir]),
}


def main():
    for name, (title, builders) in FILES.items():
        d = AlgebraDefinition(name=name, mode_algebras=[mode_algebra_entry(b()) for b in builders])
        data_path(name).write_text(f"# {title}; generated by tools/export_mode_algebras.py\n" + dump(d))


if __name__ == "__main__":
    main()
