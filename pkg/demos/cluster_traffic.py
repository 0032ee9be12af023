"""How many MST messages cross cluster borders as clusters are added.

    python3 demos/cluster_traffic.py
"""

from imsim import EngineConfig, GeneratorSpec, generate, run


def main():
    g = generate(GeneratorSpec("random", 32, 5, weighted=True))
    for clusters in (1, 2, 4, 8, 32):
        m = run("mst", g, EngineConfig(clusters=clusters)).metrics
        share = m.messages_remote / m.messages_total
        print(f"clusters={clusters:<3} remote {m.messages_remote:>5} of {m.messages_total} ({share:.0%})")


if __name__ == "__main__":
    main()
