"""Typed reasoning operations over a loaded knowledge base.

A :class:`KnowledgeBase` is the frozen union of an activity graph and a
robot graph with subclass inference applied and a validation report
attached. On top of it this module answers the six competency questions:

1. which components and affordances an activity involves,
2. the activity's ordered procedure/step/action plan,
3. the affordance set an activity requires,
4. which robots can execute an activity,
5. whether one robot can execute several activities,
6. per-step gap reports and the full robots-by-steps feasibility matrix.

Robot capabilities are resolved through the full communication chain
(agent -> node -> communication component -> communication -> message ->
capability -> enabled affordance), and feasibility is native set
containment: a step is achievable for a robot when its required affordance
set is a subset of the robot's enabled set.

Granularity note: the feasibility matrix's five steps are the activities'
top-level procedures (Retrieve tableware, Retrieve food, Serve food, Put
away food, Load dishwasher); each decomposes further into ordered
fine-grained steps and atomic actions, which is the level the task plan
exposes. A step's required set is the union over all actions beneath it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from ontobot.graph import Graph, Term, Triple, merge_graphs
from ontobot.namespaces import OBOT, PKO, PROV, RDF, RDFS, ROS
from ontobot.schema import ONTOBOT_VOCABULARY, ValidationReport, Vocabulary, infer_types, validate
from ontobot.turtle import parse_turtle_file


class UnknownEntityError(LookupError):
    """A label or IRI did not resolve to an entity of the expected kind."""

    def __init__(self, kind: str, wanted: str, available: Sequence[str]):
        listing = ", ".join(repr(name) for name in available) or "(none)"
        super().__init__(f"unknown {kind}: {wanted!r}; available: {listing}")
        self.kind = kind
        self.wanted = wanted
        self.available = list(available)


class ChainError(ValueError):
    """An order chain (nextStep / nextAction) is cyclic, forked, or incomplete."""

    def __init__(self, property_name: str, owner: str, reason: str):
        super().__init__(f"cannot order {property_name} chain of {owner}: {reason}")
        self.property_name = property_name
        self.owner = owner
        self.reason = reason


@dataclass(frozen=True)
class PlanAction:
    action: Term
    label: str
    target: Term | None
    affordances: frozenset[Term]


@dataclass(frozen=True)
class PlanStep:
    step: Term
    label: str
    actions: tuple[PlanAction, ...]


@dataclass(frozen=True)
class PlanProcedure:
    procedure: Term
    label: str
    steps: tuple[PlanStep, ...]


@dataclass(frozen=True)
class TaskPlan:
    activity: Term
    label: str
    procedures: tuple[PlanProcedure, ...]


class CapabilityChain(NamedTuple):
    node: Term
    message: Term
    capability: Term


@dataclass(frozen=True)
class CapabilityProfile:
    robot: Term
    label: str
    affordances: frozenset[Term]
    provenance: Mapping[Term, tuple[CapabilityChain, ...]]


@dataclass(frozen=True)
class StepFeasibility:
    step: Term
    label: str
    required: frozenset[Term]
    missing: frozenset[Term]

    @property
    def achievable(self) -> bool:
        return not self.missing


@dataclass(frozen=True)
class FeasibilityReport:
    robot: Term
    robot_label: str
    activity: Term
    activity_label: str
    steps: tuple[StepFeasibility, ...]

    @property
    def missing(self) -> frozenset[Term]:
        out: set[Term] = set()
        for step in self.steps:
            out.update(step.missing)
        return frozenset(out)

    @property
    def achievable(self) -> bool:
        return all(step.achievable for step in self.steps)


@dataclass(frozen=True)
class FeasibilityMatrix:
    """Achievability of every top-level step of every activity, per robot."""

    robots: tuple[tuple[Term, str], ...]
    steps: tuple[tuple[Term, Term, str], ...]  # (activity, step, step label)
    cells: Mapping[tuple[Term, Term], bool]  # (robot, step) -> achievable

    def achievable(self, robot: Term, step: Term) -> bool:
        return self.cells[(robot, step)]


def _chain_order(
    items: Sequence[Term], links: Iterable[Triple], property_name: str, owner: str
) -> list[Term]:
    """Topologically order ``items`` along a successor chain.

    The chain must be a single path over the items: no forks, no joins,
    no cycles, and no disconnected pieces.
    """
    items = list(items)
    if len(items) <= 1:
        return items
    members = set(items)
    succ: dict[Term, Term] = {}
    incoming: set[Term] = set()
    for t in links:
        if t.s not in members or t.o not in members:
            continue
        if t.s in succ and succ[t.s] != t.o:
            raise ChainError(property_name, owner, f"fork at {t.s.n3()}")
        if t.o in incoming:
            raise ChainError(property_name, owner, f"join at {t.o.n3()}")
        succ[t.s] = t.o
        incoming.add(t.o)
    heads = [x for x in items if x not in incoming]
    if len(heads) != 1:
        reason = "chain contains a cycle" if not heads else f"{len(heads)} chain heads (incomplete chain)"
        raise ChainError(property_name, owner, reason)
    ordered = [heads[0]]
    seen = {heads[0]}
    while ordered[-1] in succ:
        nxt = succ[ordered[-1]]
        if nxt in seen:
            raise ChainError(property_name, owner, "chain contains a cycle")
        ordered.append(nxt)
        seen.add(nxt)
    if len(ordered) != len(items):
        raise ChainError(property_name, owner, "chain does not connect all elements")
    return ordered


GraphSource = Union[Graph, str, "os.PathLike[str]"]


class KnowledgeBase:
    """Frozen, inference-closed union of knowledge graphs plus its validation report."""

    def __init__(self, graph: Graph, vocabulary: Vocabulary, report: ValidationReport):
        self.graph = graph
        self.vocabulary = vocabulary
        self.report = report

    @classmethod
    def load(cls, *sources: GraphSource, vocabulary: Vocabulary = ONTOBOT_VOCABULARY) -> "KnowledgeBase":
        """Build a knowledge base from graphs and/or paths to Turtle files."""
        graphs = [src if isinstance(src, Graph) else parse_turtle_file(src) for src in sources]
        merged = merge_graphs(graphs)
        inferred = infer_types(merged, vocabulary)
        return cls(inferred, vocabulary, validate(inferred, vocabulary))

    # -- entity lookup -----------------------------------------------------

    def label_of(self, node: Term) -> str:
        for term in self.graph.objects(node, RDFS.label):
            if term.is_literal:
                return term.value
        return node.value

    def _labelled_instances(self, cls: Term) -> list[tuple[Term, str]]:
        return [(node, self.label_of(node)) for node in self.graph.subjects(RDF.type, cls)]

    def activities(self) -> list[tuple[Term, str]]:
        return self._labelled_instances(PROV.Activity)

    def agents(self) -> list[tuple[Term, str]]:
        return self._labelled_instances(OBOT.Agent)

    def _resolve(self, wanted: Term | str, kind: str, instances: list[tuple[Term, str]]) -> Term:
        if isinstance(wanted, Term):
            if any(node == wanted for node, _ in instances):
                return wanted
            raise UnknownEntityError(kind, wanted.n3(), sorted(label for _, label in instances))
        for node, label in instances:
            if label == wanted:
                return node
        for node, _ in instances:
            if node.value == wanted:
                return node
        raise UnknownEntityError(kind, wanted, sorted(label for _, label in instances))

    def activity_by_label(self, wanted: Term | str) -> Term:
        return self._resolve(wanted, "activity", self.activities())

    def agent_by_label(self, wanted: Term | str) -> Term:
        return self._resolve(wanted, "robot", self.agents())

    # -- task structure ----------------------------------------------------

    def _procedures_of(self, activity: Term) -> list[Term]:
        return self.graph.objects(activity, PKO.executesProcedure)

    def _ordered_steps(self, procedure: Term) -> list[Term]:
        steps = self.graph.objects(procedure, PKO.hasStep)
        return _chain_order(steps, self.graph.match(None, PKO.nextStep, None), "pko:nextStep", self.label_of(procedure))

    def _ordered_actions(self, step: Term) -> list[Term]:
        actions = self.graph.objects(step, PKO.requiresAction)
        return _chain_order(actions, self.graph.match(None, OBOT.nextAction, None), "obot:nextAction", self.label_of(step))

    def _actions_of(self, activity: Term) -> list[Term]:
        out: dict[Term, None] = {}
        for procedure in self._procedures_of(activity):
            for step in self.graph.objects(procedure, PKO.hasStep):
                for action in self.graph.objects(step, PKO.requiresAction):
                    out.setdefault(action)
        return list(out)

    def _action_affordances(self, action: Term) -> frozenset[Term]:
        return frozenset(self.graph.objects(action, OBOT.requiresAffordance))

    # -- competency question 1 ----------------------------------------------

    def objects_and_affordances(self, activity_label: Term | str) -> frozenset[tuple[Term, Term]]:
        """Distinct (component, affordance) pairs the activity's actions involve."""
        activity = self.activity_by_label(activity_label)
        pairs: set[tuple[Term, Term]] = set()
        for action in self._actions_of(activity):
            targets = self.graph.objects(action, OBOT.actsOn)
            affordances = self.graph.objects(action, OBOT.requiresAffordance)
            pairs.update((target, affordance) for target in targets for affordance in affordances)
        return frozenset(pairs)

    # -- competency question 2 ----------------------------------------------

    def task_plan(self, activity_label: Term | str) -> TaskPlan:
        """The activity's procedures with fully ordered steps and actions."""
        activity = self.activity_by_label(activity_label)
        procedures = []
        for procedure in self._procedures_of(activity):
            steps = []
            for step in self._ordered_steps(procedure):
                actions = []
                for action in self._ordered_actions(step):
                    targets = self.graph.objects(action, OBOT.actsOn)
                    actions.append(
                        PlanAction(
                            action=action,
                            label=self.label_of(action),
                            target=targets[0] if targets else None,
                            affordances=self._action_affordances(action),
                        )
                    )
                steps.append(PlanStep(step=step, label=self.label_of(step), actions=tuple(actions)))
            procedures.append(
                PlanProcedure(procedure=procedure, label=self.label_of(procedure), steps=tuple(steps))
            )
        return TaskPlan(activity=activity, label=self.label_of(activity), procedures=tuple(procedures))

    # -- competency question 3 ----------------------------------------------

    def required_affordances(self, activity: Term | str) -> frozenset[Term]:
        """Union of the affordances required by all of the activity's actions."""
        activity = self.activity_by_label(activity)
        out: set[Term] = set()
        for action in self._actions_of(activity):
            out.update(self._action_affordances(action))
        return frozenset(out)

    # -- capability side (competency questions 4-6) --------------------------

    def capability_profile(self, robot: Term | str) -> CapabilityProfile:
        """All affordances a robot's capabilities enable, with provenance chains."""
        robot = self.agent_by_label(robot)
        provenance: dict[Term, list[CapabilityChain]] = {}
        for node in self.graph.objects(robot, OBOT.hasNode):
            for component in self.graph.objects(node, ROS.communicatesThrough):
                for comm in self.graph.subjects(ROS.hasComponent, component):
                    if Triple(comm, RDF.type, ROS.ROSCommunication) not in self.graph:
                        continue
                    for message in self.graph.objects(comm, ROS.hasMessage):
                        for capability in self.graph.objects(message, ROS.evokes):
                            for affordance in self.graph.objects(capability, OBOT.enablesAffordance):
                                chains = provenance.setdefault(affordance, [])
                                chain = CapabilityChain(node, message, capability)
                                if chain not in chains:
                                    chains.append(chain)
        return CapabilityProfile(
            robot=robot,
            label=self.label_of(robot),
            affordances=frozenset(provenance),
            provenance={aff: tuple(chains) for aff, chains in provenance.items()},
        )

    def capable_robots(self, activity: Term | str) -> frozenset[Term]:
        """Robots whose enabled affordances cover the activity's requirements."""
        required = self.required_affordances(activity)
        return frozenset(
            robot
            for robot, _ in self.agents()
            if required <= self.capability_profile(robot).affordances
        )

    def can_execute_all(self, robot: Term | str, activities: Iterable[Term | str]) -> bool:
        """True when one robot covers the union of several activities' requirements."""
        required: set[Term] = set()
        for activity in activities:
            required.update(self.required_affordances(activity))
        return required <= self.capability_profile(robot).affordances

    # -- competency question 6 ----------------------------------------------

    def _top_level_steps(self, activity: Term) -> list[tuple[Term, str, frozenset[Term]]]:
        out = []
        for procedure in self._procedures_of(activity):
            required: set[Term] = set()
            for step in self.graph.objects(procedure, PKO.hasStep):
                for action in self.graph.objects(step, PKO.requiresAction):
                    required.update(self._action_affordances(action))
            out.append((procedure, self.label_of(procedure), frozenset(required)))
        return out

    def gap_report(self, robot: Term | str, activity: Term | str) -> FeasibilityReport:
        """Which steps of the activity the robot can and cannot achieve, and why."""
        robot = self.agent_by_label(robot)
        activity = self.activity_by_label(activity)
        enabled = self.capability_profile(robot).affordances
        steps = tuple(
            StepFeasibility(step=step, label=label, required=required, missing=required - enabled)
            for step, label, required in self._top_level_steps(activity)
        )
        return FeasibilityReport(
            robot=robot,
            robot_label=self.label_of(robot),
            activity=activity,
            activity_label=self.label_of(activity),
            steps=steps,
        )

    def feasibility_matrix(self) -> FeasibilityMatrix:
        """Achievability of every activity's top-level steps for every robot."""
        robots = self.agents()
        steps: list[tuple[Term, Term, str]] = []
        requirements: dict[Term, frozenset[Term]] = {}
        for activity, _ in self.activities():
            for step, label, required in self._top_level_steps(activity):
                steps.append((activity, step, label))
                requirements[step] = required
        cells: dict[tuple[Term, Term], bool] = {}
        for robot, _ in robots:
            enabled = self.capability_profile(robot).affordances
            for _, step, _ in steps:
                cells[(robot, step)] = requirements[step] <= enabled
        return FeasibilityMatrix(robots=tuple(robots), steps=tuple(steps), cells=cells)
