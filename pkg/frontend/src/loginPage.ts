// Login page: credentials form, then the issued identifier (pattern grid,
// QR, or digits) with a countdown while the device approval is awaited.

import { ApiClient, ApiError, IdentifierInfo } from './api';
import { renderPatternSvg } from './patterns';
import { renderQrSvg } from './qr';
import { LoginFlow, LoginFlowOptions, LoginViewState } from './state';

function identifierMarkup(identifier: IdentifierInfo): string {
  if (identifier.kind === 'pattern') {
    const dots = identifier.display as number[];
    return (
      `<figure class="identifier-figure" data-kind="pattern" data-digits="${dots.join('')}">` +
      `${renderPatternSvg(dots)}` +
      `<figcaption>Draw this pattern on your device (digits: ${dots.join('')})</figcaption></figure>`
    );
  }
  if (identifier.kind === 'qr') {
    return (
      `<figure class="identifier-figure" data-kind="qr" data-token="${identifier.display}">` +
      `${renderQrSvg(identifier.canonical)}` +
      `<figcaption>Scan this code with your device</figcaption></figure>`
    );
  }
  return (
    `<figure class="identifier-figure" data-kind="numeric" data-digits="${identifier.display}">` +
    `<div class="numeric-identifier">${identifier.display}</div>` +
    `<figcaption>Type this code on your device</figcaption></figure>`
  );
}

const RESULT_COPY: Record<string, { title: string; detail: string }> = {
  success: { title: 'Signed in', detail: 'Your device approved this session.' },
  failure: { title: 'Sign-in failed', detail: 'The submission did not match this session.' },
  timeout: { title: 'Session expired', detail: 'No approval arrived in time.' },
};

export function renderLoginPage(
  container: HTMLElement,
  api: ApiClient,
  flowOptions: LoginFlowOptions = {},
): LoginFlow {
  const flow = new LoginFlow(api, {
    ...flowOptions,
    onChange: (state) => {
      update(state);
      flowOptions.onChange?.(state);
    },
  });

  container.innerHTML = `
    <section class="card login-card">
      <h1>Sign in</h1>
      <form id="credentials-form" class="form-stack">
        <label>Username <input id="username" name="username" autocomplete="username" required /></label>
        <label>Password <input id="password" name="password" type="password" autocomplete="current-password" required /></label>
        <button type="submit" class="primary">Continue</button>
        <p id="login-error" class="error" aria-live="polite"></p>
      </form>
      <div id="second-factor" hidden></div>
      <div id="login-result" hidden></div>
    </section>
  `;

  const form = container.querySelector<HTMLFormElement>('#credentials-form')!;
  const errorLine = container.querySelector<HTMLParagraphElement>('#login-error')!;
  const secondFactor = container.querySelector<HTMLDivElement>('#second-factor')!;
  const resultPanel = container.querySelector<HTMLDivElement>('#login-result')!;

  function update(state: LoginViewState): void {
    // the identifier is shown in the awaiting phase and nowhere else
    if (state.phase === 'awaiting_second_factor' && state.identifier) {
      form.hidden = true;
      resultPanel.hidden = true;
      secondFactor.hidden = false;
      secondFactor.innerHTML = `
        ${identifierMarkup(state.identifier)}
        <p class="countdown">Waiting for your device:
          <span id="countdown">${state.countdownS}</span>s left</p>
      `;
    } else if (state.phase === 'done') {
      const copy = RESULT_COPY[state.result ?? 'failure'];
      form.hidden = true;
      secondFactor.hidden = true;
      secondFactor.innerHTML = '';
      resultPanel.hidden = false;
      resultPanel.innerHTML = `
        <div class="result result-${state.result}">
          <h2>${copy.title}</h2>
          <p>${copy.detail}</p>
          <a href="#/login" id="restart" onclick="location.reload()">Start over</a>
        </div>
      `;
    }
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    errorLine.textContent = '';
    const username = container.querySelector<HTMLInputElement>('#username')!.value.trim();
    const password = container.querySelector<HTMLInputElement>('#password')!.value;
    flow.submitCredentials(username, password).catch((err) => {
      errorLine.textContent =
        err instanceof ApiError && err.code === 'LIMIT_REACHED'
          ? 'Too many open sessions for this account; try again shortly.'
          : 'Could not reach the server. Please try again.';
    });
  });

  return flow;
}
