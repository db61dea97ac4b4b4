"""Message-passing network with per-layer linear-program residual injection.

Each layer reads a continuous surrogate z-tilde = sigmoid(alpha(H)) off the
hidden states of all n+m nodes, forms the clause residual r = A-hat z - b of
the slack-augmented system, pulls it back to node space as
g = A-hat^T r (the gradient of 0.5 * ||A-hat z - b||^2 in z), lifts each
node's scalar g_p to hidden width through a small perceptron, and adds the
lift to the hidden state before ordinary sum-aggregation message passing.
With the lift disabled (or identically zero) the layer is exactly the plain
backbone.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
import torch
from torch import nn

from .graphs import LpGraph


def residual_gradient(graph: LpGraph, z: torch.Tensor) -> torch.Tensor:
    """g = A-hat^T (A-hat z - b) for z over all n+m nodes.

    Differentiable in z; this is the quantity each layer injects.
    """
    if z.shape != (graph.num_nodes,):
        raise ValueError(f"z has shape {tuple(z.shape)}, expected ({graph.num_nodes},)")
    r = clause_residual(graph, z)
    return torch.sparse.mm(graph.a_hat_t, r.unsqueeze(1)).squeeze(1)


def clause_residual(graph: LpGraph, z: torch.Tensor) -> torch.Tensor:
    """r = A-hat z - b, one entry per clause."""
    if z.shape != (graph.num_nodes,):
        raise ValueError(f"z has shape {tuple(z.shape)}, expected ({graph.num_nodes},)")
    return torch.sparse.mm(graph.a_hat, z.unsqueeze(1)).squeeze(1) - graph.b


def _mlp(in_dim: int, hidden_dim: int, out_dim: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Linear(in_dim, hidden_dim),
        nn.ReLU(),
        nn.Linear(hidden_dim, out_dim),
    )


def default_update(hidden_dim: int) -> nn.Module:
    """Default update network: two-layer MLP on [h-bar, aggregated messages]."""
    return _mlp(2 * hidden_dim, hidden_dim, hidden_dim)


VAR_FEATURES = 3
SLACK_FEATURES = 4


class LpResidualGNN(nn.Module):
    """Bipartite variable/slack graph network with residual injection.

    Structure per layer: a scalar projection producing the surrogate
    z-tilde, a two-layer lift 1 -> d for the injected gradient, a message
    network on (neighbor state, edge coefficient), and an update network on
    (own state, summed messages). The update family is pluggable via
    `update_builder(hidden_dim) -> nn.Module` consuming (N, 2d) -> (N, d).

    Heads: a classification head on mean-pooled variable and slack states,
    and a per-variable assignment head.
    """

    def __init__(
        self,
        hidden_dim: int = 128,
        num_layers: int = 16,
        use_residual: bool = True,
        update_builder: Callable[[int], nn.Module] = default_update,
        dtype: torch.dtype = torch.float32,
    ) -> None:
        super().__init__()
        if hidden_dim < 1 or num_layers < 1:
            raise ValueError("hidden_dim and num_layers must be positive")
        self.hidden_dim = hidden_dim
        self.num_layers = num_layers
        self.use_residual = use_residual
        self.var_encoder = _mlp(VAR_FEATURES, hidden_dim, hidden_dim)
        self.slack_encoder = _mlp(SLACK_FEATURES, hidden_dim, hidden_dim)
        self.type_embedding = nn.Embedding(2, hidden_dim)
        self.alphas = nn.ModuleList(
            nn.Linear(hidden_dim, 1) for _ in range(num_layers)
        )
        self.lifts = nn.ModuleList(
            _mlp(1, hidden_dim, hidden_dim) for _ in range(num_layers)
        )
        self.messages = nn.ModuleList(
            _mlp(hidden_dim + 1, hidden_dim, hidden_dim) for _ in range(num_layers)
        )
        self.updates = nn.ModuleList(
            update_builder(hidden_dim) for _ in range(num_layers)
        )
        self.class_head = _mlp(2 * hidden_dim, hidden_dim, 1)
        self.assign_head = _mlp(hidden_dim, hidden_dim, 1)
        self.to(dtype)

    def initial_state(self, graph: LpGraph) -> torch.Tensor:
        """H^0: per-type feature encoders plus node-type embedding."""
        encoded = torch.cat(
            [
                self.var_encoder(graph.var_features),
                self.slack_encoder(graph.slack_features),
            ],
            dim=0,
        )
        return encoded + self.type_embedding(graph.node_type)

    def surrogate(self, H: torch.Tensor, layer: int) -> torch.Tensor:
        """z-tilde = sigmoid(alpha_layer(H)), in (0,1)^(n+m)."""
        return torch.sigmoid(self.alphas[layer](H)).squeeze(-1)

    def forward_layer(self, H: torch.Tensor, graph: LpGraph, layer: int) -> torch.Tensor:
        if H.shape != (graph.num_nodes, self.hidden_dim):
            raise ValueError(
                f"H has shape {tuple(H.shape)}, expected "
                f"({graph.num_nodes}, {self.hidden_dim})"
            )
        if self.use_residual:
            z = self.surrogate(H, layer)
            g = residual_gradient(graph, z)
            h_bar = H + self.lifts[layer](g.unsqueeze(-1))
        else:
            h_bar = H
        inputs = torch.cat([h_bar[graph.edge_src], graph.edge_attr], dim=-1)
        messages = self.messages[layer](inputs)
        aggregated = torch.zeros_like(h_bar).index_add_(0, graph.edge_dst, messages)
        return self.updates[layer](torch.cat([h_bar, aggregated], dim=-1))

    def node_states(self, graph: LpGraph) -> torch.Tensor:
        H = self.initial_state(graph)
        for layer in range(self.num_layers):
            H = self.forward_layer(H, graph, layer)
        return H

    def forward(self, graph: LpGraph) -> tuple[torch.Tensor, torch.Tensor]:
        """Return (classification logit, per-variable assignment logits)."""
        H = self.node_states(graph)
        pooled = torch.cat([H[: graph.n].mean(dim=0), H[graph.n :].mean(dim=0)])
        class_logit = self.class_head(pooled).squeeze(-1)
        assign_logits = self.assign_head(H[: graph.n]).squeeze(-1)
        return class_logit, assign_logits

    @torch.no_grad()
    def predict(self, graph: LpGraph) -> tuple[float, np.ndarray]:
        """(satisfiability probability, assignment thresholded at 0.5)."""
        class_logit, assign_logits = self(graph)
        probability = float(torch.sigmoid(class_logit))
        assignment = (assign_logits > 0).to(torch.uint8).cpu().numpy()
        return probability, assignment
