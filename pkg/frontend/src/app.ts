// Application flow: configure a session, alternate moves with the engine,
// surface hints and illegal-move feedback inline, end on a terminal banner.
// One active session per page; every human action maps to exactly one API
// call and the board re-renders only from fresh server payloads.

import { ApiError, GameClient, IllegalMoveError } from './api.js';
import { renderBoard } from './board.js';
import { renderModel, colorName, type BoardViewModel } from './model.js';
import { runLayout, type LayoutNode } from './layout.js';
import type { SessionPayload } from './types.js';

interface Elements {
  form: HTMLFormElement;
  board: SVGSVGElement;
  banner: HTMLElement;
  moves: HTMLElement;
  history: HTMLElement;
  error: HTMLElement;
  hint: HTMLButtonElement;
}

export class App {
  private model: BoardViewModel | null = null;
  private layout: LayoutNode[] = [];
  private expanded = new Set<string>();
  private pendingNeighborhood = new Set<number>();
  private highlighted: { color?: number; neighborhood?: number[] } | null = null;

  constructor(
    private readonly client: GameClient,
    private readonly els: Elements,
  ) {
    els.form.addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.createSession();
    });
    els.hint.addEventListener('click', () => void this.requestHint());
  }

  private async createSession(): Promise<void> {
    const data = new FormData(this.els.form);
    const target = String(data.get('target') ?? '');
    const isFormula = target.includes('forall') || target.includes('exists');
    try {
      const payload = await this.client.createSession({
        graph: isFormula ? undefined : target,
        formula: isFormula ? target : undefined,
        k: isFormula ? undefined : Number(data.get('k') ?? 3),
        human_role: (data.get('role') as 'painter' | 'drawer') ?? 'painter',
        opponent: (data.get('opponent') as 'solver' | 'script' | 'random') ?? 'solver',
      });
      this.adopt(payload);
    } catch (err) {
      this.showError(err);
    }
  }

  /** Adopt a fresh server payload as the whole truth and re-render. */
  adopt(payload: SessionPayload): void {
    this.model = renderModel(payload);
    this.highlighted = null;
    this.pendingNeighborhood.clear();
    const pinned = this.model.clusters.flatMap((c) => c.members);
    this.layout = runLayout(this.model.vertices.length, this.model.edges, pinned);
    this.render();
  }

  private render(): void {
    if (!this.model) {
      return;
    }
    renderBoard(this.els.board, this.model, this.layout, this.expanded, {
      onVertexClick: (v) => this.toggleNeighborhood(v),
      onClusterToggle: (name) => {
        if (this.expanded.has(name)) {
          this.expanded.delete(name);
        } else {
          this.expanded.add(name);
        }
        this.render();
      },
    });
    this.els.banner.textContent = this.model.statusBanner;
    this.renderMoveButtons();
    this.els.history.replaceChildren(
      ...this.model.history.map((line) => {
        const li = document.createElement('li');
        li.textContent = line;
        return li;
      }),
    );
  }

  private renderMoveButtons(): void {
    const model = this.model;
    if (!model) {
      return;
    }
    const container = this.els.moves;
    container.replaceChildren();
    if (!model.humanTurn) {
      return;
    }
    if (model.humanRole === 'painter') {
      for (const color of model.legalColors) {
        const btn = document.createElement('button');
        btn.textContent = colorName(color);
        btn.style.background = 'white';
        if (this.highlighted?.color === color) {
          btn.style.outline = '3px solid gold';
        }
        btn.addEventListener('click', () => void this.playColor(color));
        container.appendChild(btn);
      }
    } else {
      const chosen = [...this.pendingNeighborhood].sort((a, b) => a - b);
      const label = document.createElement('span');
      label.textContent = `new vertex adjacent to: {${chosen.join(', ')}} `;
      container.appendChild(label);
      const submit = document.createElement('button');
      submit.textContent = 'present';
      submit.addEventListener('click', () => void this.playNeighborhood(chosen));
      container.appendChild(submit);
      for (const nb of model.legalNeighborhoods) {
        const quick = document.createElement('button');
        quick.textContent = `{${nb.join(', ')}}`;
        if (
          this.highlighted?.neighborhood &&
          JSON.stringify(this.highlighted.neighborhood) === JSON.stringify(nb)
        ) {
          quick.style.outline = '3px solid gold';
        }
        quick.addEventListener('click', () => void this.playNeighborhood(nb));
        container.appendChild(quick);
      }
    }
  }

  private toggleNeighborhood(vertex: number): void {
    if (this.model?.humanRole !== 'drawer' || !this.model.humanTurn) {
      return;
    }
    if (this.pendingNeighborhood.has(vertex)) {
      this.pendingNeighborhood.delete(vertex);
    } else {
      this.pendingNeighborhood.add(vertex);
    }
    this.renderMoveButtons();
  }

  private async playColor(color: number): Promise<void> {
    if (!this.model) {
      return;
    }
    try {
      this.adopt(await this.client.move(this.model.sessionId, { color }));
      this.clearError();
    } catch (err) {
      this.showError(err);
    }
  }

  private async playNeighborhood(neighborhood: number[]): Promise<void> {
    if (!this.model) {
      return;
    }
    try {
      this.adopt(
        await this.client.move(this.model.sessionId, { neighborhood }),
      );
      this.clearError();
    } catch (err) {
      this.showError(err);
    }
  }

  private async requestHint(): Promise<void> {
    if (!this.model) {
      return;
    }
    try {
      const hint = await this.client.hint(this.model.sessionId);
      this.highlighted = hint.move;
      this.renderMoveButtons();
    } catch (err) {
      this.showError(err);
    }
  }

  private showError(err: unknown): void {
    if (err instanceof IllegalMoveError) {
      const legal = err.info.legal_moves;
      const options = legal.colors
        ? legal.colors.map(colorName).join(', ')
        : (legal.neighborhoods ?? [])
            .map((nb) => `{${nb.join(', ')}}`)
            .join('  ');
      this.els.error.textContent = `${err.info.error}; legal: ${options}`;
      return;
    }
    if (err instanceof ApiError) {
      this.els.error.textContent = `service error ${err.status}: ${JSON.stringify(err.detail)}`;
      return;
    }
    this.els.error.textContent = `network problem, retry: ${String(err)}`;
  }

  private clearError(): void {
    this.els.error.textContent = '';
  }
}

export function bootstrap(): void {
  const base = (window as { ONCOL_BASE_URL?: string }).ONCOL_BASE_URL ?? '';
  const client = new GameClient(base, (input, init) => fetch(input, init));
  const byId = (id: string) => document.getElementById(id)!;
  const app = new App(client, {
    form: byId('setup') as HTMLFormElement,
    board: byId('board') as unknown as SVGSVGElement,
    banner: byId('banner'),
    moves: byId('moves'),
    history: byId('history'),
    error: byId('error'),
    hint: byId('hint') as HTMLButtonElement,
  });
  void app;
}
