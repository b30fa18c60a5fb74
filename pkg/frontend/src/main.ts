// Hash-routed entry point: #/login (default) and #/register.

import { ApiClient } from './api';
import { renderLoginPage } from './loginPage';
import { renderRegisterPage } from './registerPage';

const api = new ApiClient('');

function route(): void {
  const container = document.getElementById('app');
  if (!container) return;
  if (location.hash === '#/register') {
    renderRegisterPage(container, api);
  } else {
    renderLoginPage(container, api);
  }
}

window.addEventListener('hashchange', route);
document.addEventListener('DOMContentLoaded', route);
