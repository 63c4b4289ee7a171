"""Independent reference implementations used as test oracles.

These stay deliberately naive and separate from the library code: the
brace routines are line-by-line transcriptions of the published
pseudocode, the metric is recomputed from raw label lists, and the
gradient oracle is central finite differences.
"""

from __future__ import annotations

import math


def reference_balance(text: str) -> str:
    """Literal transcription of the brace-balancing pseudocode."""
    opening_count = text.count("{")
    closing_count = text.count("}")
    if opening_count > closing_count:
        while opening_count > closing_count:
            index = text.find("{")
            if index != -1:
                text = text[:index] + text[index + 1:]
                opening_count -= 1
    elif closing_count > opening_count:
        while closing_count > opening_count:
            index = text.rfind("}")
            if index != -1:
                text = text[:index] + text[index + 1:]
                closing_count -= 1
    return text.strip()


def reference_remove_spans(text: str) -> str:
    """Literal transcription of the brace-span removal pseudocode.

    Note the accumulator starts as a single space, exactly as published;
    the library deliberately starts from the empty string, so callers
    compare against this oracle modulo that leading space.
    """
    stack: list[str] = []
    clean_text = " "
    for char in text:
        if char == "{":
            stack.append(char)
        elif char == "}":
            if stack and stack[-1] == "{":
                stack.pop()
        else:
            if not stack:
                clean_text = clean_text + char
    return clean_text


def brute_force_macro_f1(gold: list[int], predicted: list[int]) -> float:
    """Macro F1 recomputed per class straight from the label lists."""
    assert len(gold) == len(predicted)
    f1s = []
    for cls in (0, 1):
        tp = sum(1 for g, p in zip(gold, predicted) if g == cls and p == cls)
        pred_pos = sum(1 for p in predicted if p == cls)
        actual_pos = sum(1 for g in gold if g == cls)
        precision = tp / pred_pos if pred_pos else 0.0
        recall = tp / actual_pos if actual_pos else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        f1s.append(f1)
    return (f1s[0] + f1s[1]) / 2


def numeric_gradient(loss_fn, weights, step: float = 1e-6) -> list[float]:
    """Central finite differences of a scalar loss over a weight vector."""
    grad = []
    for i in range(len(weights)):
        wp = list(weights)
        wm = list(weights)
        wp[i] += step
        wm[i] -= step
        grad.append((loss_fn(wp) - loss_fn(wm)) / (2 * step))
    return grad


def scalar_adamw_trace(
    w0: float,
    gradients: list[float],
    lr: float,
    beta1: float,
    beta2: float,
    eps: float,
    weight_decay: float,
) -> float:
    """Hand-rolled scalar AdamW: bias-corrected moments, eps outside the
    square root, decoupled decay applied straight to the weight."""
    w, m, v = w0, 0.0, 0.0
    for t, g in enumerate(gradients, start=1):
        m = beta1 * m + (1 - beta1) * g
        v = beta2 * v + (1 - beta2) * g * g
        m_hat = m / (1 - beta1**t)
        v_hat = v / (1 - beta2**t)
        w = w - lr * m_hat / (math.sqrt(v_hat) + eps) - lr * weight_decay * w
    return w
