"""Compare LCR and HS leader election on rings of growing size.

LCR sends n^2 messages; HS stays near n log n at the price of more supersteps.

    python3 demos/ring_election.py
"""

from imsim import EngineConfig, GeneratorSpec, generate, run


def main():
    print(f"{'n':>5} {'lcr msgs':>9} {'hs msgs':>8} {'lcr steps':>9} {'hs steps':>8}")
    for p in range(3, 10):
        n = 2**p
        lcr = run("lcr", generate(GeneratorSpec("ring-uni", n, 101)), EngineConfig()).metrics
        hs = run("hs", generate(GeneratorSpec("ring-bi", n, 101)), EngineConfig()).metrics
        print(f"{n:>5} {lcr.messages_total:>9} {hs.messages_total:>8} "
              f"{lcr.supersteps:>9} {hs.supersteps:>8}")


if __name__ == "__main__":
    main()
