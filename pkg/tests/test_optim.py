import numpy as np
import pytest

from revdict.errors import InvalidArgument, NumericError
from revdict.model import GradientSet, build_model
from revdict.optim import AdamWState, OptimConfig, adamw_step


def ones_grads(model, value=1.0):
    return GradientSet(
        weight_grads=[np.full_like(w, value) for _, w, _ in model.layers],
        bias_grads=[np.full_like(b, value) for _, _, b in model.layers],
    )


def snapshot(model):
    return [(w.copy(), b.copy()) for _, w, b in model.layers]


class TestConfig:
    def test_defaults(self):
        cfg = OptimConfig()
        assert cfg.learning_rate == 1e-4
        assert (cfg.beta1, cfg.beta2) == (0.9, 0.999)
        assert cfg.epsilon == 1e-8
        assert cfg.weight_decay == 0.01

    @pytest.mark.parametrize("kwargs", [
        {"learning_rate": 0}, {"beta1": 1.0}, {"beta2": 0.0},
        {"epsilon": 0}, {"weight_decay": -1},
    ])
    def test_bounds(self, kwargs):
        with pytest.raises(InvalidArgument):
            OptimConfig(**kwargs)


class TestStep:
    def test_hand_computed_first_step(self):
        # theta=1, g=1, fresh state, defaults, wd=0: m_hat=v_hat=1,
        # step = lr * 1/(1 + eps) ~= lr, so theta' ~= 0.9999
        m = build_model(1, 1, 1, 0.0, 0)
        for _, w, b in m.layers:
            w.fill(1.0)
            b.fill(1.0)
        cfg = OptimConfig(weight_decay=0.0)
        state = AdamWState.fresh(m)
        adamw_step(m, ones_grads(m), state, cfg)
        assert state.t == 1
        for _, w, b in m.layers:
            assert np.allclose(w, 0.9999, atol=1e-8)
            assert np.allclose(b, 0.9999, atol=1e-8)

    def test_zero_grad_no_decay_is_identity(self):
        m = build_model(2, 2, 2, 0.0, 1)
        before = snapshot(m)
        adamw_step(m, ones_grads(m, 0.0), AdamWState.fresh(m),
                   OptimConfig(weight_decay=0.0))
        for (w0, b0), (_, w1, b1) in zip(before, m.layers):
            assert np.array_equal(w0, w1)
            assert np.array_equal(b0, b1)

    def test_decoupled_decay_weights_only(self):
        m = build_model(2, 2, 2, 0.0, 1)
        cfg = OptimConfig(weight_decay=0.5)
        before = snapshot(m)
        adamw_step(m, ones_grads(m, 0.0), AdamWState.fresh(m), cfg)
        factor = 1.0 - cfg.learning_rate * cfg.weight_decay
        for (w0, b0), (_, w1, b1) in zip(before, m.layers):
            assert np.allclose(w1, w0 * factor)
            assert np.array_equal(b1, b0)

    def test_first_step_magnitude_and_sign(self):
        rng = np.random.default_rng(3)
        m = build_model(3, 3, 2, 0.0, 7)
        grads = GradientSet(
            weight_grads=[rng.normal(size=w.shape) for _, w, _ in m.layers],
            bias_grads=[rng.normal(size=b.shape) for _, _, b in m.layers],
        )
        cfg = OptimConfig(weight_decay=0.0)
        before = snapshot(m)
        adamw_step(m, grads, AdamWState.fresh(m), cfg)
        for (w0, _), (_, w1, _), gw in zip(before, m.layers,
                                           grads.weight_grads):
            delta = w1 - w0
            assert np.all(np.abs(delta) <= cfg.learning_rate * (1 + 1e-9))
            nz = gw != 0
            assert np.all(np.sign(delta[nz]) == -np.sign(gw[nz]))

    def test_determinism(self):
        for _ in range(2):
            m = build_model(2, 2, 2, 0.0, 4)
            state = AdamWState.fresh(m)
            for t in range(3):
                adamw_step(m, ones_grads(m, 0.1 * (t + 1)), state, OptimConfig())
            results = snapshot(m)
        m2 = build_model(2, 2, 2, 0.0, 4)
        state2 = AdamWState.fresh(m2)
        for t in range(3):
            adamw_step(m2, ones_grads(m2, 0.1 * (t + 1)), state2, OptimConfig())
        for (w1, b1), (_, w2, b2) in zip(results, m2.layers):
            assert np.array_equal(w1, w2)
            assert np.array_equal(b1, b2)

    def test_non_finite_gradient(self):
        m = build_model(2, 2, 2, 0.0, 0)
        grads = ones_grads(m)
        grads.weight_grads[2][0, 0] = np.nan
        with pytest.raises(NumericError, match="layer 2"):
            adamw_step(m, grads, AdamWState.fresh(m), OptimConfig())

    def test_state_shapes_congruent(self):
        m = build_model(3, 2, 2, 0.0, 0)
        state = AdamWState.fresh(m)
        adamw_step(m, ones_grads(m), state, OptimConfig())
        for (_, w, b), mw, mb in zip(m.layers, state.m_weights, state.m_biases):
            assert mw.shape == w.shape
            assert mb.shape == b.shape
