"""
Paradigm Visualizer
Charts for competition matrices, angle models and class rotation batches using Plotly
"""
import logging
import math

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

from composition import angle_of_sum

logger = logging.getLogger(__name__)


class ParadigmVisualizer:

    COLORS = {
        'stem': '#3B82F6',        # Blue
        'affix': '#10B981',       # Green
        'sum': '#F59E0B',         # Orange
        'axis': '#1F2937',        # Dark gray
        'flagged': '#EF4444',     # Red
        'ok': '#8B5CF6',          # Purple
        'background': '#F9FAFB',
        'grid': '#E5E7EB',
    }

    def create_competition_heatmap(self, table, title="Competition matrix"):
        """Heatmap of activations, rows are cells and columns morphemes"""
        frame = pd.DataFrame(table["entries"], index=table["row_labels"], columns=table["col_labels"])
        fig = go.Figure(go.Heatmap(
            z=frame.values,
            x=list(frame.columns),
            y=list(frame.index),
            colorscale='Blues',
            text=[[f"{v:.3f}" for v in row] for row in frame.values],
            texttemplate="%{text}",
            hovertemplate="%{y} / %{x}: %{z:.4f}<extra></extra>",
        ))
        fig.update_layout(title=title, plot_bgcolor=self.COLORS['background'],
                          yaxis=dict(autorange='reversed'))
        return fig

    def create_angle_chart(self, model, pairs=(), title="Morphemes on the unit circle"):
        """Stems, affixes and selected stem+affix sums in the feature plane"""
        fig = go.Figure()
        x_label, y_label = model.plane
        for axis_x, axis_y in (((-2.2, 2.2), (0, 0)), ((0, 0), (-2.2, 2.2))):
            fig.add_trace(go.Scatter(x=axis_x, y=axis_y, mode='lines', showlegend=False,
                                     line=dict(color=self.COLORS['axis'], width=1)))
        circle = [2 * math.pi * k / 120 for k in range(121)]
        fig.add_trace(go.Scatter(x=[math.cos(t) for t in circle], y=[math.sin(t) for t in circle],
                                 mode='lines', showlegend=False, line=dict(color=self.COLORS['grid'], dash='dot')))

        for kind, labels in (('stem', model.stems), ('affix', model.affixes)):
            for label in labels:
                theta = model.angles[label]
                fig.add_trace(go.Scatter(
                    x=[0, math.cos(theta)], y=[0, math.sin(theta)], mode='lines+text',
                    text=['', label], textposition='top center', name=f"{kind} {label}",
                    line=dict(color=self.COLORS[kind], width=2),
                ))
        for stem, affix in pairs:
            angle, length = angle_of_sum(model.angles[stem], model.angles[affix])
            fig.add_trace(go.Scatter(
                x=[0, length * math.cos(angle)], y=[0, length * math.sin(angle)], mode='lines+text',
                text=['', f"{stem}+{affix}"], textposition='top center', name=f"{stem}+{affix}",
                line=dict(color=self.COLORS['sum'], width=2, dash='dash'),
            ))
        fig.update_layout(title=title, xaxis_title=x_label, yaxis_title=y_label,
                          plot_bgcolor=self.COLORS['background'],
                          yaxis=dict(scaleanchor='x', scaleratio=1))
        return fig

    def create_rotation_summary_chart(self, records, title="Class rotation batch"):
        """Mean iterations and smallest margins per class"""
        frame = pd.DataFrame(records)
        colors = [self.COLORS['flagged'] if f else self.COLORS['ok'] for f in frame['flagged']]
        fig = make_subplots(rows=1, cols=2, subplot_titles=("Mean iterations", "Smallest margin"))
        fig.add_trace(go.Bar(x=frame['class'], y=frame['mean_iterations'], marker_color=colors,
                             name='iterations'), row=1, col=1)
        fig.add_trace(go.Bar(x=frame['class'], y=frame['smallest_margin'], marker_color=self.COLORS['affix'],
                             name='margin'), row=1, col=2)
        fig.update_layout(title=title, showlegend=False, plot_bgcolor=self.COLORS['background'])
        return fig

    def save(self, fig, path):
        fig.write_html(str(path), include_plotlyjs='cdn')
        logger.info("Wrote chart %s", path)
        return path
