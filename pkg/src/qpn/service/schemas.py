"""Request and response models for the service endpoints.

The network schema mirrors the on-disk file format exactly, so files
round-trip through the wire unchanged.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from qpn.network import Network
from qpn.oracle import Quantification


class ArcModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    tail: str = Field(alias="from")
    to: str
    sign: str


class SynergyModel(BaseModel):
    pair: list[str]
    child: str
    value: bool
    sign: str


class NetworkModel(BaseModel):
    nodes: list[str]
    arcs: list[ArcModel] = []
    synergies: list[SynergyModel] = []

    def to_network(self) -> Network:
        return Network.from_payload(self.model_dump(by_alias=True))

    @classmethod
    def from_network(cls, net: Network) -> "NetworkModel":
        return cls.model_validate(net.to_payload())


class EvidenceModel(BaseModel):
    node: str
    value: bool


class QueryRequest(BaseModel):
    network: NetworkModel
    observed: dict[str, bool] = {}
    evidence: EvidenceModel
    interest: str


class ValidateRequest(BaseModel):
    network: NetworkModel


class ValidateResponse(BaseModel):
    violations: list[str]


class PropagateRequest(BaseModel):
    network: NetworkModel
    observed: dict[str, bool] = {}
    evidence: EvidenceModel
    interest: str
    trace: bool = False


class PropagateResponse(BaseModel):
    signs: dict[str, str]
    trace: Optional[list[str]] = None


class RelevantRequest(QueryRequest):
    pass


class RelevantResponse(BaseModel):
    outcome: Literal["ok", "disconnected"]
    network: Optional[NetworkModel] = None
    detail: Optional[str] = None


class ExplainRequest(QueryRequest):
    depth: int = 1


class ChainModel(BaseModel):
    resolver: str
    nodes: list[str]
    sign: str


class BranchModel(BaseModel):
    assignment: dict[str, str]
    positive: list[ChainModel]
    negative: list[ChainModel]
    result: str


class ExplanationModel(BaseModel):
    evidence: str
    interest: str
    pivot: str
    frontier: list[str]
    chains: list[ChainModel]
    branches: list[BranchModel]
    pivot_to_interest: str
    children: list["ExplanationModel"] = []


ExplanationModel.model_rebuild()


class ExplainResponse(BaseModel):
    outcome: Literal["explained", "no-ambiguity"]
    explanation: Optional[ExplanationModel] = None
    signs: dict[str, str] = {}


class TablesModel(BaseModel):
    tables: dict[str, dict]

    def to_quantification(self) -> Quantification:
        return Quantification.from_payload(self.model_dump())


class CheckRequest(QueryRequest):
    trials: int = 100
    seed: int = 0
    tables: Optional[TablesModel] = None


class CheckResponse(BaseModel):
    passed: bool
    trials_run: int
    skipped: int
    lines: list[str]
