"""refnets: Petri nets, colored nets and reference-data nets for learnflow models."""

__version__ = "0.1.0"
